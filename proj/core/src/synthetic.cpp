#include "passprob/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <vector>

#include "passprob/csv.hpp"
#include "passprob/errors.hpp"
#include "passprob/rng.hpp"

namespace passprob::synth {

namespace {

constexpr const char* kHome = "HOM";
constexpr const char* kVisitor = "VIS";

struct Roster {
    struct P {
        std::int64_t id;
        std::string name;
        int jersey;
        std::string position;
        bool offense;
    };
    std::vector<P> players;
};

const std::vector<std::string> kFirst = {"Ray", "Dan", "Carl", "Tom", "Ed", "Sam"};
const std::vector<std::string> kLast = {"Alpha", "Bravo", "Carter", "Delta", "Echo", "Foster"};

Roster make_roster(std::int64_t base_id, int n_decoys, int n_defenders) {
    Roster r;
    r.players.push_back({base_id + 1, "Pat Quarter", 7, "QB", true});
    r.players.push_back({base_id + 2, kFirst[0] + " " + kLast[0], 11, "WR", true});
    const char* decoy_pos[] = {"WR", "TE", "RB", "FB", "WR"};
    for (int j = 0; j < n_decoys; ++j) {
        r.players.push_back({base_id + 3 + j, kFirst[j + 1] + " " + kLast[j + 1], 20 + j,
                             decoy_pos[j % 5], true});
    }
    const char* def_pos[] = {"CB", "S", "LB", "DB", "CB"};
    for (int k = 0; k < n_defenders; ++k) {
        r.players.push_back({base_id + 10 + k, "Vic Defoe" + std::string(1, static_cast<char>('A' + k)),
                             40 + k, def_pos[k % 5], false});
    }
    return r;
}

struct TrackRow {
    double x, y;
    std::string event;
    std::int64_t nfl_id;  // 0 = ball
    std::string name;
    int jersey;
    std::string position;
    int frame_id;
    bool home;  // offense plays at home
    bool ball;
};

void emit_row(std::ofstream& out, const TrackRow& r, std::int64_t game_id, std::int64_t play_id,
              bool left) {
    double x = r.x, y = r.y;
    if (left) {
        x = kFieldLengthYd - x;
        y = kFieldWidthYd - y;
    }
    out << csv::fmt(x) << ',' << csv::fmt(y) << ',' << (r.event.empty() ? "None" : r.event) << ',';
    if (r.ball) out << ",,,";
    else out << r.nfl_id << ',' << csv::quote(r.name) << ',' << r.jersey << ',';
    out << r.position << ',' << r.frame_id << ',' << (r.ball ? "football" : r.home ? "home" : "away")
        << ',' << game_id << ',' << play_id << ',' << (left ? "left" : "right") << '\n';
}

}  // namespace

ingest::Paths paths_for(const std::string& out_dir) {
    return {out_dir + "/games.csv", out_dir + "/players.csv", out_dir + "/plays.csv",
            {out_dir + "/week1.csv"}};
}

void generate(const SynthConfig& config, const std::string& out_dir) {
    const ingest::Paths paths = paths_for(out_dir);
    std::ofstream games(paths.games), players(paths.players), plays(paths.plays),
        week(paths.tracking[0]), truth(out_dir + "/truth.csv");
    if (!games || !players || !plays || !week || !truth)
        throw MissingPrerequisiteError("cannot write synthetic dataset under " + out_dir);

    games << "gameId,gameDate,gameTimeEastern,homeTeamAbbr,visitorTeamAbbr,week\n";
    players << "nflId,height,weight,birthDate,collegeName,position,displayName\n";
    plays << "gameId,playId,playDescription,quarter,down,yardsToGo,possessionTeam,"
             "yardlineSide,yardlineNumber,offenseFormation,defendersInTheBox,"
             "numberOfPassRushers,typeDropback,preSnapVisitorScore,preSnapHomeScore,"
             "gameClock,penaltyCodes,passResult\n";
    week << "x,y,event,nflId,displayName,jerseyNumber,position,frameId,team,gameId,playId,"
            "playDirection\n";
    truth << "gameId,playId,targetNflId\n";

    const int n_games = (config.n_plays + config.plays_per_game - 1) / config.plays_per_game;
    for (int g = 0; g < n_games; ++g) {
        const std::int64_t game_id = 2018090600 + g;
        games << game_id << ",2018-09-06,20:20:00," << kHome << ',' << kVisitor << ',' << 1 << '\n';
        const Roster roster = make_roster(10000 + 100 * g, config.n_decoys, config.n_defenders);
        for (const auto& p : roster.players) {
            players << p.id << ",6-2,210,1993-05-0" << (1 + p.id % 9) << ",State," << p.position
                    << ',' << csv::quote(p.name) << '\n';
        }
    }

    const std::vector<std::string> formations = {"SHOTGUN", "SINGLEBACK", "EMPTY", "I_FORM",
                                                 "PISTOL"};
    const std::vector<std::string> dropbacks = {"TRADITIONAL", "DESIGNED_ROLLOUT_LEFT",
                                                "DESIGNED_ROLLOUT_RIGHT", "SCRAMBLE"};

    for (int p = 0; p < config.n_plays; ++p) {
        auto rng = rng::make_engine(config.seed, rng::kSaltSynth, static_cast<std::uint64_t>(p));
        std::normal_distribution<double> jitter(0.0, config.noise);
        auto jx = [&](double v) { return config.noise > 0 ? v + jitter(rng) : v; };

        const int g = p / config.plays_per_game;
        const std::int64_t game_id = 2018090600 + g;
        const std::int64_t play_id = 100 + p % config.plays_per_game;
        const Roster roster = make_roster(10000 + 100 * g, config.n_decoys, config.n_defenders);
        const bool left = (p % 3 == 2);

        const double v = 0.5;           // ball advance per frame (yards)
        const int T = 8 + p % 13;       // airborne frames
        const double y0 = 18.0 + (p % 5) * 3.0;
        const double x_release = 30.0;
        const double x_catch = x_release + v * (T + 1);

        std::uniform_real_distribution<double> sep_dist(config.min_separation, config.max_separation);
        const double sep = sep_dist(rng);
        // completion odds improve with separation, degrade with pass length
        const double logit_p = 1.2 * (sep - 2.5) - 0.08 * (x_catch - x_release) + 1.0;
        const double p_complete = 1.0 / (1.0 + std::exp(-logit_p));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const bool complete = config.noise > 0 ? unif(rng) < p_complete : sep > 2.0;

        const auto& passer = roster.players[0];
        const auto& receiver = roster.players[1];
        const std::string recv_abbrev =
            receiver.name.substr(0, 1) + "." + receiver.name.substr(receiver.name.find(' ') + 1);
        const std::string passer_abbrev =
            passer.name.substr(0, 1) + "." + passer.name.substr(passer.name.find(' ') + 1);

        std::string desc = "(12:3" + std::to_string(p % 10) + ") " + passer_abbrev;
        const bool hide_name = !complete && (p % 11 == 7);
        if (complete)
            desc += " pass short right to " + recv_abbrev + " for " +
                    std::to_string(static_cast<int>(x_catch - x_release)) + " yards.";
        else if (hide_name)
            desc += " pass incomplete short right.";
        else
            desc += " pass incomplete short right to " + recv_abbrev + ".";

        plays << game_id << ',' << play_id << ',' << csv::quote(desc) << ',' << (1 + p % 4) << ','
              << (1 + p % 3) << ',' << (5 + p % 10) << ',' << kHome << ',' << kHome << ','
              << (20 + p % 25) << ',' << formations[p % formations.size()] << ',' << (5 + p % 4)
              << ',' << (3 + p % 3) << ',' << dropbacks[p % dropbacks.size()] << ',' << (p % 21)
              << ',' << (p % 17) << ",12:3" << (p % 10) << ",," << (complete ? "C" : "I") << '\n';
        truth << game_id << ',' << play_id << ',' << receiver.id << '\n';

        // --- frame construction -------------------------------------------
        const int release_frame = 6;  // pass_forward event
        const int last_flight = release_frame + T;
        const int outcome_frame = last_flight + 1;

        std::vector<TrackRow> rows;
        auto add = [&](double x, double y, const std::string& event, const Roster::P* pl,
                       int frame) {
            TrackRow r;
            r.x = x;
            r.y = y;
            r.event = event;
            r.frame_id = frame;
            if (pl) {
                r.nfl_id = pl->id;
                r.name = pl->name;
                r.jersey = pl->jersey;
                r.position = pl->position;
                r.home = pl->offense;
                r.ball = false;
            } else {
                r.nfl_id = 0;
                r.jersey = 0;
                r.home = false;
                r.ball = true;
            }
            rows.push_back(std::move(r));
        };

        // Per-decoy "distance to ball" schedule; the zero-noise construction
        // keeps the line-distance and delta-based probability vectors equal
        // and rising toward the receiver every frame.
        auto decoy_h = [&](int j, int t) {
            double h = 8.0 + j;
            for (int tau = 1; tau <= t; ++tau) h += v + 0.05 * tau;
            return h;
        };
        auto decoy_off = [&](int t) { return 0.01 * (2.0 + 0.05 * t); };

        for (int frame = 1; frame <= outcome_frame; ++frame) {
            std::string event;
            if (frame == 2) event = "ball_snap";
            else if (frame == release_frame) event = "pass_forward";
            else if (frame == outcome_frame)
                event = complete ? "pass_outcome_caught" : "pass_outcome_incomplete";

            // ball
            double bx;
            if (frame <= release_frame) bx = x_release - 0.05 * (release_frame - frame);
            else if (frame <= last_flight) bx = x_release + v * (frame - release_frame);
            else bx = x_catch;
            add(bx, y0, event, nullptr, frame);

            // passer sits just behind the release point
            add(jx(x_release - 2.0), jx(y0 + 0.5), event, &roster.players[0], frame);

            const int t = frame <= release_frame ? 0 : std::min(frame, last_flight) - release_frame;

            if (config.symmetric_decoys) {
                // two candidates mirrored about the ball line, ball aimed at
                // the midpoint between them
                const double dx = x_catch;
                add(jx(dx), jx(y0 + 4.0), event, &roster.players[1], frame);
                if (config.n_decoys > 0) add(jx(dx), jx(y0 - 4.0), event, &roster.players[2], frame);
            } else {
                // aimed receiver waits at the catch point, on the ball line
                add(jx(x_catch), jx(y0), event, &roster.players[1], frame);
                for (int j = 0; j < config.n_decoys; ++j) {
                    const double off = decoy_off(t);
                    const double h = decoy_h(j, t);
                    const double ball_x = frame <= release_frame ? x_release
                                        : x_release + v * std::min(frame - release_frame, T);
                    const double dxj = ball_x - std::sqrt(h * h - off * off);
                    const double dyj = j % 2 == 0 ? y0 + off : y0 - off;
                    add(jx(dxj), jx(dyj), event, &roster.players[2 + j], frame);
                }
            }

            for (int k = 0; k < config.n_defenders; ++k) {
                const double dx = x_catch - sep - 0.3 * k + 0.02 * frame;
                const double dy = y0 + 2.0 + 1.5 * k;
                add(jx(dx), jx(dy), event, &roster.players[2 + config.n_decoys + k], frame);
            }
        }

        for (const auto& r : rows) emit_row(week, r, game_id, play_id, left);
    }
}

}  // namespace passprob::synth
