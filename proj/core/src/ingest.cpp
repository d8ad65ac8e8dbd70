#include "passprob/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "passprob/csv.hpp"
#include "passprob/errors.hpp"

namespace passprob::ingest {

using nlohmann::json;

namespace {

const std::vector<std::string> kOutcomeEvents = {
    "pass_outcome_caught", "pass_outcome_incomplete",
    "pass_outcome_interception", "pass_outcome_touchdown"};

bool is_outcome_event(const std::string& ev) {
    return std::find(kOutcomeEvents.begin(), kOutcomeEvents.end(), ev) != kOutcomeEvents.end();
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty() || s == "NA") return false;
    const char* b = s.data();
    auto res = std::from_chars(b, b + s.size(), out);
    return res.ec == std::errc();
}

bool parse_int(const std::string& s, std::int64_t& out) {
    if (s.empty() || s == "NA") return false;
    // tolerate a trailing ".0" (some exports write ids as floats)
    double d;
    if (!parse_double(s, d)) return false;
    out = static_cast<std::int64_t>(std::llround(d));
    return true;
}

// letters-only lowercase
std::string squash(const std::string& s) {
    std::string out;
    for (char ch : s)
        if (std::isalpha(static_cast<unsigned char>(ch)))
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    return out;
}

std::string last_word(const std::string& s) {
    auto pos = s.find_last_of(" .");
    return pos == std::string::npos ? s : s.substr(pos + 1);
}

double clock_to_seconds(const std::string& game_clock) {
    // "MM:SS" or "MM:SS:ss"
    int mm = 0, ss = 0;
    if (std::sscanf(game_clock.c_str(), "%d:%d", &mm, &ss) != 2) return 0.0;
    return 60.0 * mm + ss;
}

}  // namespace

std::string abbreviate_name(const std::string& display_name) {
    auto sp = display_name.find(' ');
    if (sp == std::string::npos || sp == 0) return display_name;
    return display_name.substr(0, 1) + "." + display_name.substr(sp + 1);
}

bool names_match(const std::string& abbrev, const std::string& display_name) {
    // Compare first initial and last name, ignoring punctuation and case.
    if (abbrev.empty() || display_name.empty()) return false;
    auto dot = abbrev.find('.');
    std::string initial = dot == std::string::npos ? abbrev.substr(0, 1) : abbrev.substr(0, dot);
    std::string last = dot == std::string::npos ? abbrev : abbrev.substr(dot + 1);
    std::string first_disp = display_name.substr(0, display_name.find(' '));
    if (squash(initial) != squash(first_disp).substr(0, squash(initial).size())) return false;
    return squash(last_word(last)) == squash(last_word(display_name));
}

std::optional<std::string> parse_target_name(const std::string& description) {
    static const std::regex to_re(
        R"(pass[^.]*?\bto ([A-Z][A-Za-z]*\.\s?[A-Za-z'.-]+))");
    static const std::regex intended_re(
        R"(intended for ([A-Z][A-Za-z]*\.\s?[A-Za-z'.-]+))");
    std::smatch m;
    auto trim = [](std::string name) {
        while (!name.empty() && (name.back() == '.' || name.back() == '\'' || name.back() == '-'))
            name.pop_back();
        return name;
    };
    if (std::regex_search(description, m, to_re)) return trim(m[1].str());
    if (std::regex_search(description, m, intended_re)) return trim(m[1].str());
    return std::nullopt;
}

std::optional<std::string> parse_passer_name(const std::string& description) {
    static const std::regex re(R"(([A-Z][A-Za-z]*\.\s?[A-Za-z'.-]+) (pass|spiked|sacked|scrambles))");
    std::smatch m;
    if (std::regex_search(description, m, re)) return m[1].str();
    return std::nullopt;
}

std::optional<std::string> filter_reason(const std::string& pass_result,
                                         const std::string& penalty_codes,
                                         const std::string& offense_formation,
                                         const std::string& description) {
    if (pass_result == "S") return reason::kSack;
    if (!penalty_codes.empty() && penalty_codes != "NA") return reason::kPenalty;
    if (description.find("spiked") != std::string::npos) return reason::kSpike;
    if (description.find("threw away") != std::string::npos) return reason::kThrowaway;
    if (offense_formation.empty() || offense_formation == "NA") return reason::kMissingFormation;
    if (pass_result != "C" && pass_result != "I" && pass_result != "IN")
        return reason::kBadOutcomeCode;
    return std::nullopt;
}

std::optional<EntityId> resolve_target(const PlayRecord& record,
                                       const std::vector<TrackingFrame>& frames,
                                       int outcome_frame_index) {
    if (record.candidates.empty()) return std::nullopt;

    // roster lookup among candidates
    auto display_of = [&](EntityId id) -> std::string {
        for (const auto& f : frames)
            if (const Entity* e = f.find(id)) return e->display_name;
        return {};
    };

    if (auto name = parse_target_name(record.description)) {
        for (EntityId id : record.candidates) {
            if (names_match(*name, display_of(id))) return id;
        }
    }

    // Nearest eligible receiver to the ball at the outcome frame.
    const TrackingFrame* of = nullptr;
    for (const auto& f : frames)
        if (f.frame_index == outcome_frame_index) { of = &f; break; }
    if (!of) of = frames.empty() ? nullptr : &frames.back();
    if (!of) return std::nullopt;
    const Entity* ball = of->ball();
    if (!ball) return std::nullopt;

    EntityId best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (EntityId id : record.candidates) {
        const Entity* e = of->find(id);
        if (!e) continue;
        double d = geom::euclidean(e->point(), ball->point());
        if (d < best_d || (d == best_d && id < best)) {
            best_d = d;
            best = id;
        }
    }
    if (best == 0) return std::nullopt;
    return best;
}

WindowResult window_pass_frames(const std::vector<TrackingFrame>& frames) {
    WindowResult res;
    std::size_t pf = frames.size(), oc = frames.size();
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (pf == frames.size() && frames[i].event == "pass_forward") pf = i;
        else if (pf != frames.size() && is_outcome_event(frames[i].event)) { oc = i; break; }
    }
    if (pf == frames.size()) {
        res.error = reason::kNoPassForward;
        return res;
    }
    if (oc == frames.size()) {
        res.error = reason::kNoOutcome;
        return res;
    }
    // Frames strictly between the two events; trim while the ball has not yet
    // moved forward (x non-increasing counts as not yet forward).
    std::size_t first = pf + 1;
    while (first < oc) {
        const Entity* prev = frames[first - 1].ball();
        const Entity* now = frames[first].ball();
        if (!prev || !now) { res.error = reason::kNoBallTracking; return res; }
        if (now->x > prev->x) break;
        ++first;
    }
    if (first >= oc) {
        res.error = reason::kEmptyWindow;
        return res;
    }
    res.first = frames[first].frame_index;
    res.last = frames[oc - 1].frame_index;
    return res;
}

// ---------------------------------------------------------------------------

namespace {

struct RawPlay {
    std::string description, pass_result, penalty_codes, formation, dropback;
    std::string possession, yardline_side, game_clock;
    std::int64_t quarter = 1, down = 1;
    double yards_to_go = 10, defenders_in_box = 0, pass_rushers = 0;
    double yardline_number = 50, home_score = 0, visitor_score = 0;
    bool ok = true;
};

struct GameInfo {
    std::string home, visitor;
};

struct PlayerInfo {
    std::string name, position;
};

using Key = std::pair<std::int64_t, std::int64_t>;

void process_play(const Key& key, std::vector<TrackingFrame> frames,
                  const std::map<Key, RawPlay>& plays,
                  const std::map<std::int64_t, GameInfo>& games,
                  const std::map<std::int64_t, PlayerInfo>& players,
                  Corpus& out) {
    auto exclude = [&](const char* why) { out.report.excluded[why]++; };

    auto pit = plays.find(key);
    if (pit == plays.end()) { exclude(reason::kNoPlayRecord); return; }
    const RawPlay& raw = pit->second;

    if (auto why = filter_reason(raw.pass_result, raw.penalty_codes, raw.formation,
                                 raw.description)) {
        exclude(why->c_str());
        return;
    }

    std::sort(frames.begin(), frames.end(),
              [](const TrackingFrame& a, const TrackingFrame& b) {
                  return a.frame_index < b.frame_index;
              });
    for (const auto& f : frames) {
        if (!f.ball()) { exclude(reason::kNoBallTracking); return; }
    }
    if (frames.empty()) { exclude(reason::kNoBallTracking); return; }

    PlayRecord rec;
    rec.game_id = key.first;
    rec.play_id = key.second;
    rec.description = raw.description;
    rec.quarter = static_cast<int>(raw.quarter);
    rec.down = static_cast<int>(raw.down);
    rec.yards_to_go = raw.yards_to_go;
    rec.offense_formation = raw.formation;
    rec.defenders_in_box = raw.defenders_in_box;
    rec.pass_rushers = raw.pass_rushers;
    rec.dropback_type = raw.dropback.empty() ? "UNKNOWN" : raw.dropback;
    rec.clock_seconds = clock_to_seconds(raw.game_clock);
    if (raw.yardline_number >= 50 || raw.yardline_side.empty())
        rec.yardline = raw.yardline_number;
    else if (raw.yardline_side == raw.possession)
        rec.yardline = raw.yardline_number;
    else
        rec.yardline = 100 - raw.yardline_number;

    auto git = games.find(key.first);
    if (git != games.end()) {
        rec.offense_is_home = (raw.possession == git->second.home);
    }
    rec.offense_score = rec.offense_is_home ? raw.home_score : raw.visitor_score;
    rec.defense_score = rec.offense_is_home ? raw.visitor_score : raw.home_score;
    rec.outcome = raw.pass_result == "C" ? Outcome::Complete
                : raw.pass_result == "IN" ? Outcome::Intercepted
                                          : Outcome::Incomplete;

    WindowResult win = window_pass_frames(frames);
    if (!win.error.empty()) { exclude(win.error.c_str()); return; }
    rec.window_first = win.first;
    rec.window_last = win.last;

    // Passer: description name matched against offense roster, else the QB.
    const TrackingFrame* wf = nullptr;
    for (const auto& f : frames)
        if (f.frame_index == win.first) { wf = &f; break; }
    auto passer_name = parse_passer_name(raw.description);
    for (const auto& e : wf->entities) {
        if (e.side != TeamSide::Offense) continue;
        if (passer_name && names_match(*passer_name, e.display_name)) {
            rec.passer_id = e.id;
            break;
        }
    }
    if (rec.passer_id == 0) {
        for (const auto& e : wf->entities)
            if (e.side == TeamSide::Offense && e.position == "QB") { rec.passer_id = e.id; break; }
    }

    // Candidates: offense skill players minus the passer (linemen are absent
    // from tracking, so no further position filtering is needed).
    for (const auto& e : wf->entities) {
        if (e.side == TeamSide::Offense && e.id != rec.passer_id)
            rec.candidates.push_back(e.id);
    }
    std::sort(rec.candidates.begin(), rec.candidates.end());
    if (rec.candidates.empty()) { exclude(reason::kNoCandidates); return; }

    // Outcome frame index = frame after window end carrying the outcome event.
    int outcome_frame = win.last;
    for (const auto& f : frames)
        if (f.frame_index > win.last && is_outcome_event(f.event)) { outcome_frame = f.frame_index; break; }

    auto target = resolve_target(rec, frames, outcome_frame);
    if (!target) { exclude(reason::kUnresolvableTarget); return; }
    rec.target_id = *target;

    (void)players;
    out.report.retained++;
    out.report.max_window_len = std::max(out.report.max_window_len, rec.window_last - rec.window_first + 1);
    out.plays.push_back(Play{std::move(rec), std::move(frames)});
}

}  // namespace

Corpus load_and_normalize(const Paths& paths) {
    Corpus out;

    std::map<std::int64_t, GameInfo> games;
    {
        std::ifstream in(paths.games);
        if (!in) throw MissingPrerequisiteError("cannot open games table: " + paths.games);
        csv::Table t(in, {"gameId", "homeTeamAbbr", "visitorTeamAbbr"}, "games");
        while (t.next()) {
            std::int64_t gid;
            if (!parse_int(t.get("gameId"), gid)) { out.report.rows_skipped++; continue; }
            games[gid] = {t.get("homeTeamAbbr"), t.get("visitorTeamAbbr")};
        }
    }

    std::map<std::int64_t, PlayerInfo> players;
    {
        std::ifstream in(paths.players);
        if (!in) throw MissingPrerequisiteError("cannot open players table: " + paths.players);
        csv::Table t(in, {"nflId", "displayName", "position"}, "players");
        while (t.next()) {
            std::int64_t id;
            if (!parse_int(t.get("nflId"), id)) { out.report.rows_skipped++; continue; }
            players[id] = {t.get("displayName"), t.get("position")};
        }
    }

    std::map<Key, RawPlay> plays;
    {
        std::ifstream in(paths.plays);
        if (!in) throw MissingPrerequisiteError("cannot open plays table: " + paths.plays);
        csv::Table t(in,
                     {"gameId", "playId", "playDescription", "quarter", "down", "yardsToGo",
                      "possessionTeam", "yardlineSide", "yardlineNumber", "offenseFormation",
                      "defendersInTheBox", "numberOfPassRushers", "typeDropback",
                      "preSnapVisitorScore", "preSnapHomeScore", "gameClock", "penaltyCodes",
                      "passResult"},
                     "plays");
        while (t.next()) {
            std::int64_t gid = 0, pid = 0;
            if (!parse_int(t.get("gameId"), gid) || !parse_int(t.get("playId"), pid)) {
                out.report.rows_skipped++;
                continue;
            }
            RawPlay p;
            p.description = t.get("playDescription");
            p.pass_result = t.get("passResult");
            p.penalty_codes = t.get("penaltyCodes");
            p.formation = t.get("offenseFormation");
            p.dropback = t.get("typeDropback");
            p.possession = t.get("possessionTeam");
            p.yardline_side = t.get("yardlineSide");
            p.game_clock = t.get("gameClock");
            parse_int(t.get("quarter"), p.quarter);
            parse_int(t.get("down"), p.down);
            parse_double(t.get("yardsToGo"), p.yards_to_go);
            parse_double(t.get("yardlineNumber"), p.yardline_number);
            parse_double(t.get("defendersInTheBox"), p.defenders_in_box);
            parse_double(t.get("numberOfPassRushers"), p.pass_rushers);
            parse_double(t.get("preSnapHomeScore"), p.home_score);
            parse_double(t.get("preSnapVisitorScore"), p.visitor_score);
            plays[{gid, pid}] = std::move(p);
        }
    }

    // Streaming over tracking rows, one play group in memory at a time.
    for (const auto& path : paths.tracking) {
        std::ifstream in(path);
        if (!in) throw MissingPrerequisiteError("cannot open tracking table: " + path);
        csv::Table t(in,
                     {"x", "y", "event", "nflId", "displayName", "jerseyNumber", "position",
                      "frameId", "team", "gameId", "playId", "playDirection"},
                     path);
        Key current{-1, -1};
        bool have_current = false;
        std::map<int, TrackingFrame> frames_by_id;
        std::string direction;
        std::string possession;

        auto flush = [&]() {
            if (!have_current) return;
            std::vector<TrackingFrame> frames;
            frames.reserve(frames_by_id.size());
            for (auto& [fi, fr] : frames_by_id) frames.push_back(std::move(fr));
            frames_by_id.clear();
            process_play(current, std::move(frames), plays, games, players, out);
        };

        while (t.next()) {
            std::int64_t gid = 0, pid = 0;
            if (!parse_int(t.get("gameId"), gid) || !parse_int(t.get("playId"), pid)) {
                out.report.rows_skipped++;
                continue;
            }
            Key key{gid, pid};
            if (!have_current || key != current) {
                flush();
                current = key;
                have_current = true;
                auto pit = plays.find(key);
                possession = pit != plays.end() ? pit->second.possession : "";
            }
            double x, y;
            std::int64_t frame_id;
            if (!parse_double(t.get("x"), x) || !parse_double(t.get("y"), y) ||
                !parse_int(t.get("frameId"), frame_id)) {
                out.report.rows_skipped++;
                continue;
            }
            direction = t.get("playDirection");

            Entity e;
            const std::string team = t.get("team");
            if (team == "football") {
                e.side = TeamSide::Ball;
                e.id = 0;
            } else {
                std::int64_t nid;
                if (!parse_int(t.get("nflId"), nid)) { out.report.rows_skipped++; continue; }
                e.id = nid;
                bool home_team = (team == "home");
                auto git = games.find(gid);
                bool offense_home = git != games.end() && possession == git->second.home;
                e.side = (home_team == offense_home) ? TeamSide::Offense : TeamSide::Defense;
            }
            e.display_name = t.get("displayName");
            std::int64_t jersey;
            e.jersey = parse_int(t.get("jerseyNumber"), jersey) ? static_cast<int>(jersey) : -1;
            e.position = t.get("position");
            geom::Point2 p{x, y};
            if (direction == "left") p = flip_point(p);
            e.x = p.x;
            e.y = p.y;

            TrackingFrame& fr = frames_by_id[static_cast<int>(frame_id)];
            fr.game_id = gid;
            fr.play_id = pid;
            fr.frame_index = static_cast<int>(frame_id);
            if (fr.event.empty()) {
                const std::string ev = t.get("event");
                if (ev != "None" && ev != "NA") fr.event = ev;
            }
            fr.entities.push_back(std::move(e));
        }
        flush();
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

json record_to_json(const PlayRecord& r) {
    return json{{"game_id", r.game_id},
                {"play_id", r.play_id},
                {"quarter", r.quarter},
                {"down", r.down},
                {"yards_to_go", r.yards_to_go},
                {"formation", r.offense_formation},
                {"defenders_in_box", r.defenders_in_box},
                {"pass_rushers", r.pass_rushers},
                {"dropback", r.dropback_type},
                {"clock_seconds", r.clock_seconds},
                {"yardline", r.yardline},
                {"offense_score", r.offense_score},
                {"defense_score", r.defense_score},
                {"offense_is_home", r.offense_is_home},
                {"outcome", r.outcome == Outcome::Complete ? "C"
                          : r.outcome == Outcome::Intercepted ? "IN" : "I"},
                {"passer_id", r.passer_id},
                {"target_id", r.target_id},
                {"candidates", r.candidates},
                {"window", {r.window_first, r.window_last}},
                {"description", r.description}};
}

PlayRecord record_from_json(const json& j) {
    PlayRecord r;
    r.game_id = j.at("game_id").get<std::int64_t>();
    r.play_id = j.at("play_id").get<std::int64_t>();
    r.quarter = j.at("quarter").get<int>();
    r.down = j.at("down").get<int>();
    r.yards_to_go = j.at("yards_to_go").get<double>();
    r.offense_formation = j.at("formation").get<std::string>();
    r.defenders_in_box = j.at("defenders_in_box").get<double>();
    r.pass_rushers = j.at("pass_rushers").get<double>();
    r.dropback_type = j.at("dropback").get<std::string>();
    r.clock_seconds = j.at("clock_seconds").get<double>();
    r.yardline = j.at("yardline").get<double>();
    r.offense_score = j.at("offense_score").get<double>();
    r.defense_score = j.at("defense_score").get<double>();
    r.offense_is_home = j.at("offense_is_home").get<bool>();
    const std::string oc = j.at("outcome").get<std::string>();
    r.outcome = oc == "C" ? Outcome::Complete : oc == "IN" ? Outcome::Intercepted : Outcome::Incomplete;
    r.passer_id = j.at("passer_id").get<EntityId>();
    r.target_id = j.at("target_id").get<EntityId>();
    r.candidates = j.at("candidates").get<std::vector<EntityId>>();
    r.window_first = j.at("window")[0].get<int>();
    r.window_last = j.at("window")[1].get<int>();
    r.description = j.at("description").get<std::string>();
    return r;
}

}  // namespace

void save_store(std::ostream& out, const std::vector<Play>& plays) {
    for (const Play& p : plays) {
        json frames = json::array();
        for (const TrackingFrame& f : p.frames) {
            json ents = json::array();
            for (const Entity& e : f.entities) {
                ents.push_back(json::array(
                    {e.id, e.display_name, e.jersey, e.position,
                     e.side == TeamSide::Offense ? "O" : e.side == TeamSide::Defense ? "D" : "B",
                     e.x, e.y}));
            }
            frames.push_back(json{{"f", f.frame_index}, {"e", f.event}, {"ents", std::move(ents)}});
        }
        json line{{"v", "store-v1"}, {"record", record_to_json(p.record)}, {"frames", std::move(frames)}};
        out << line.dump() << "\n";
    }
}

std::vector<Play> load_store(std::istream& in) {
    std::vector<Play> plays;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j.value("v", "") != "store-v1")
            throw SchemaError("play store: unknown schema version '" + j.value("v", "") +
                              "', expected 'store-v1'");
        Play p;
        p.record = record_from_json(j.at("record"));
        for (const json& jf : j.at("frames")) {
            TrackingFrame f;
            f.game_id = p.record.game_id;
            f.play_id = p.record.play_id;
            f.frame_index = jf.at("f").get<int>();
            f.event = jf.at("e").get<std::string>();
            for (const json& je : jf.at("ents")) {
                Entity e;
                e.id = je[0].get<EntityId>();
                e.display_name = je[1].get<std::string>();
                e.jersey = je[2].get<int>();
                e.position = je[3].get<std::string>();
                const std::string side = je[4].get<std::string>();
                e.side = side == "O" ? TeamSide::Offense : side == "D" ? TeamSide::Defense : TeamSide::Ball;
                e.x = je[5].get<double>();
                e.y = je[6].get<double>();
                f.entities.push_back(std::move(e));
            }
            p.frames.push_back(std::move(f));
        }
        plays.push_back(std::move(p));
    }
    return plays;
}

std::string IngestReport::to_json() const {
    json j{{"retained", retained},
           {"rows_skipped", rows_skipped},
           {"max_window_len", max_window_len},
           {"excluded", excluded}};
    return j.dump(2);
}

IngestReport IngestReport::from_json(const std::string& text) {
    json j = json::parse(text);
    IngestReport r;
    r.retained = j.value("retained", 0L);
    r.rows_skipped = j.value("rows_skipped", 0L);
    r.max_window_len = j.value("max_window_len", 0);
    if (j.contains("excluded"))
        r.excluded = j.at("excluded").get<std::map<std::string, long>>();
    return r;
}

void save_store_file(const std::string& path, const Corpus& corpus, const std::string& report_path) {
    std::ofstream out(path);
    if (!out) throw MissingPrerequisiteError("cannot write play store: " + path);
    save_store(out, corpus.plays);
    if (!report_path.empty()) {
        std::ofstream rep(report_path);
        rep << corpus.report.to_json() << "\n";
    }
}

Corpus load_store_file(const std::string& path, const std::string& report_path) {
    std::ifstream in(path);
    if (!in)
        throw MissingPrerequisiteError("play store not found: " + path +
                                       " (run the ingest command first)");
    Corpus c;
    c.plays = load_store(in);
    if (!report_path.empty()) {
        std::ifstream rep(report_path);
        if (rep) {
            std::stringstream ss;
            ss << rep.rdbuf();
            c.report = IngestReport::from_json(ss.str());
        }
    }
    return c;
}

}  // namespace passprob::ingest
