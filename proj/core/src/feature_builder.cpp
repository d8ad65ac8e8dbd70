#include "passprob/feature_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "passprob/csv.hpp"
#include "passprob/errors.hpp"

namespace passprob::features {

namespace {

const std::vector<std::string> kQuarters = {"1", "2", "3", "4", "5"};
const std::vector<std::string> kDowns = {"1", "2", "3", "4"};
const std::vector<std::string> kFormations = {"SHOTGUN",  "SINGLEBACK", "EMPTY", "I_FORM",
                                              "PISTOL",   "JUMBO",      "WILDCAT"};
const std::vector<std::string> kDropbacks = {
    "TRADITIONAL",           "DESIGNED_ROLLOUT_LEFT",  "DESIGNED_ROLLOUT_RIGHT",
    "SCRAMBLE",              "SCRAMBLE_ROLLOUT_LEFT",  "SCRAMBLE_ROLLOUT_RIGHT",
    "UNKNOWN"};
const std::vector<std::string> kOffensePos = {"QB", "RB", "WR", "TE", "FB"};
const std::vector<std::string> kDefensePos = {"CB", "S", "LB", "DB", "DL"};

}  // namespace

const std::vector<ColumnSpec>& schema() {
    static const std::vector<ColumnSpec> cols = {
        {"quarter", kQuarters},
        {"down", kDowns},
        {"yards_to_go", {}},
        {"offense_formation", kFormations},
        {"defenders_in_box", {}},
        {"pass_rushers", {}},
        {"dropback_type", kDropbacks},
        {"clock_seconds", {}},
        {"yardline", {}},
        {"offense_score", {}},
        {"defense_score", {}},
        {"offense_is_home", {}},
        {"passer_to_target_distance", {}},
        {"target_position", kOffensePos},
        {"def1_position", kDefensePos},
        {"def2_position", kDefensePos},
        {"target_ball_line_dist", {}},
        {"target_ball_dist", {}},
        {"target_ball_delta", {}},
        {"def1_ball_line_dist", {}},
        {"def1_ball_dist", {}},
        {"def1_ball_delta", {}},
        {"def2_ball_line_dist", {}},
        {"def2_ball_dist", {}},
        {"def2_ball_delta", {}},
        {"def1_target_line_dist", {}},
        {"def1_target_dist", {}},
        {"def1_target_delta", {}},
        {"def2_target_line_dist", {}},
        {"def2_target_dist", {}},
        {"def2_target_delta", {}},
        {"sideline_dist", {}},
    };
    return cols;
}

int category_code(const ColumnSpec& col, const std::string& label) {
    auto it = std::find(col.categories.begin(), col.categories.end(), label);
    return it == col.categories.end() ? -1 : static_cast<int>(it - col.categories.begin());
}

std::string offense_position_group(const std::string& raw) {
    if (raw == "QB" || raw == "WR" || raw == "TE" || raw == "FB") return raw;
    if (raw == "RB" || raw == "HB") return "RB";
    return "RB";
}

std::string defense_position_group(const std::string& raw) {
    if (raw == "CB" || raw == "DB") return raw;
    if (raw == "S" || raw == "FS" || raw == "SS") return "S";
    if (raw == "LB" || raw == "ILB" || raw == "MLB" || raw == "OLB") return "LB";
    if (raw == "DE" || raw == "DT" || raw == "NT" || raw == "DL") return "DL";
    return "DB";
}

namespace {

// Point-to-line distance with the stationary-candidate fallback.
double line_or_euclid(geom::Point2 p, geom::Point2 a, geom::Point2 b) {
    if (a.x == b.x && a.y == b.y) return geom::euclidean(p, b);
    return geom::point_to_line_distance(p, a, b);
}

}  // namespace

DefenderPair assign_defenders(const TrackingFrame& frame, const TrackingFrame& prev_frame,
                              EntityId candidate_id) {
    DefenderPair out;
    const Entity* cand = frame.find(candidate_id);
    const Entity* cand_prev = prev_frame.find(candidate_id);
    if (!cand) return out;
    const geom::Point2 now = cand->point();
    const geom::Point2 before = cand_prev ? cand_prev->point() : now;

    const Entity* best_line = nullptr;
    double best_line_d = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, const Entity*>> by_euclid;
    for (const auto& e : frame.entities) {
        if (e.side != TeamSide::Defense) continue;
        const double dl = line_or_euclid(e.point(), before, now);
        if (dl < best_line_d || (dl == best_line_d && best_line && e.id < best_line->id)) {
            best_line_d = dl;
            best_line = &e;
        }
        by_euclid.emplace_back(geom::euclidean(e.point(), now), &e);
    }
    if (by_euclid.size() < 2) return out;

    std::sort(by_euclid.begin(), by_euclid.end(), [](const auto& a, const auto& b) {
        return a.first < b.first || (a.first == b.first && a.second->id < b.second->id);
    });
    out.closest = best_line;
    out.second = by_euclid[0].second == best_line ? by_euclid[1].second : by_euclid[0].second;
    return out;
}

FeatureRow build_features(const Play& play, const TrackingFrame& frame,
                          const TrackingFrame& prev_frame, const target::FrameDistances& fd,
                          std::size_t panel_index) {
    const PlayRecord& rec = play.record;
    const EntityId cand_id = fd.candidate_ids[panel_index];

    FeatureRow row;
    row.game_id = rec.game_id;
    row.play_id = rec.play_id;
    row.frame_index = fd.frame_index;
    row.t = fd.t;
    row.candidate_id = cand_id;
    row.label = is_complete(rec.outcome) ? 1.0 : 0.0;

    const Entity* cand = frame.find(cand_id);
    if (!cand) throw IncompleteRowError("candidate position");
    const Entity* cand_prev = prev_frame.find(cand_id);
    if (!cand_prev) throw IncompleteRowError("candidate previous position");
    const Entity* ball = frame.ball();
    const Entity* ball_prev = prev_frame.ball();
    if (!ball || !ball_prev) throw IncompleteRowError("ball position");

    DefenderPair defs = assign_defenders(frame, prev_frame, cand_id);
    if (!defs.closest || !defs.second) throw IncompleteRowError("two tracked defenders");
    const Entity* d1p = defs.closest;
    const Entity* d2p = defs.second;
    const Entity* d1_prev = prev_frame.find(d1p->id);
    const Entity* d2_prev = prev_frame.find(d2p->id);
    if (!d1_prev || !d2_prev) throw IncompleteRowError("defender previous position");

    // Passer-to-target distance at the moment of pass release.
    const TrackingFrame* release = nullptr;
    for (const auto& f : play.frames)
        if (f.event == "pass_forward") { release = &f; break; }
    if (!release) release = &prev_frame;
    const Entity* passer = release->find(rec.passer_id);
    const Entity* target_at_release = release->find(cand_id);
    if (!passer) throw IncompleteRowError("passer position at release");
    if (!target_at_release) throw IncompleteRowError("candidate position at release");

    // Ball motion line for the defender line distances (same line the panel
    // used for d1; reconstruct from the most recent distinct ball position).
    geom::Point2 line_a = ball_prev->point();
    if (line_a.x == ball->x && line_a.y == ball->y) {
        for (auto it = play.frames.rbegin(); it != play.frames.rend(); ++it) {
            if (it->frame_index >= frame.frame_index) continue;
            const Entity* b = it->ball();
            if (b && (b->x != ball->x || b->y != ball->y)) { line_a = b->point(); break; }
        }
    }

    auto set_cat = [&](std::size_t i, const std::string& label) {
        const int code = category_code(schema()[i], label);
        if (code < 0) throw IncompleteRowError(schema()[i].name + " category '" + label + "'");
        row.x[i] = code;
    };

    set_cat(0, std::to_string(rec.quarter));
    set_cat(1, std::to_string(rec.down));
    row.x[2] = rec.yards_to_go;
    set_cat(3, rec.offense_formation);
    row.x[4] = rec.defenders_in_box;
    row.x[5] = rec.pass_rushers;
    set_cat(6, rec.dropback_type);
    row.x[7] = rec.clock_seconds;
    row.x[8] = rec.yardline;
    row.x[9] = rec.offense_score;
    row.x[10] = rec.defense_score;
    row.x[11] = rec.offense_is_home ? 1.0 : 0.0;
    row.x[12] = geom::euclidean(passer->point(), target_at_release->point());
    set_cat(13, offense_position_group(cand->position));
    set_cat(14, defense_position_group(d1p->position));
    set_cat(15, defense_position_group(d2p->position));
    row.x[16] = fd.d1[panel_index];
    row.x[17] = fd.d4[panel_index];
    row.x[18] = fd.d3[panel_index];

    auto ball_metrics = [&](const Entity* def, const Entity* def_prev, std::size_t base) {
        row.x[base] = line_or_euclid(def->point(), line_a, ball->point());
        row.x[base + 1] = geom::euclidean(def->point(), ball->point());
        row.x[base + 2] =
            row.x[base + 1] - geom::euclidean(def_prev->point(), ball_prev->point());
    };
    ball_metrics(d1p, d1_prev, 19);
    ball_metrics(d2p, d2_prev, 22);

    auto target_metrics = [&](const Entity* def, const Entity* def_prev, std::size_t base) {
        row.x[base] = line_or_euclid(def->point(), cand_prev->point(), cand->point());
        row.x[base + 1] = geom::euclidean(def->point(), cand->point());
        row.x[base + 2] =
            row.x[base + 1] - geom::euclidean(def_prev->point(), cand_prev->point());
    };
    target_metrics(d1p, d1_prev, 25);
    target_metrics(d2p, d2_prev, 28);

    row.x[31] = std::min(cand->y, kFieldWidthYd - cand->y);
    return row;
}

namespace {

void build_rows_for_panel(const target::PlayPanel& panel, bool true_target_only,
                          std::vector<FeatureRow>& out, BuildStats* stats) {
    const Play& play = *panel.play;
    for (const auto& fd : panel.frames) {
        const TrackingFrame* frame = play.frame_at(fd.frame_index);
        if (!frame) continue;
        const TrackingFrame* prev = nullptr;
        for (const auto& f : play.frames)
            if (f.frame_index < fd.frame_index && (!prev || f.frame_index > prev->frame_index))
                prev = &f;
        if (!prev) continue;
        for (std::size_t i = 0; i < fd.size(); ++i) {
            if (true_target_only && fd.candidate_ids[i] != play.record.target_id) continue;
            try {
                out.push_back(build_features(play, *frame, *prev, fd, i));
                if (stats) stats->rows++;
            } catch (const IncompleteRowError& err) {
                if (stats) {
                    stats->skipped++;
                    if (std::find(stats->skip_reasons.begin(), stats->skip_reasons.end(),
                                  err.what()) == stats->skip_reasons.end())
                        stats->skip_reasons.push_back(err.what());
                }
            }
        }
    }
}

}  // namespace

std::vector<FeatureRow> build_training_rows(const std::vector<target::PlayPanel>& panels,
                                            BuildStats* stats) {
    std::vector<FeatureRow> rows;
    for (const auto& panel : panels) build_rows_for_panel(panel, true, rows, stats);
    return rows;
}

std::vector<FeatureRow> build_candidate_rows(const target::PlayPanel& panel, BuildStats* stats) {
    std::vector<FeatureRow> rows;
    build_rows_for_panel(panel, false, rows, stats);
    return rows;
}

void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows) {
    out << "#schema=" << kSchemaVersion << "\n";
    out << "game_id,play_id,frame_index,t,candidate_id,label";
    for (const auto& col : schema()) out << ',' << col.name;
    out << '\n';
    for (const auto& row : rows) {
        out << row.game_id << ',' << row.play_id << ',' << row.frame_index << ',' << row.t << ','
            << row.candidate_id << ',' << row.label;
        for (std::size_t i = 0; i < kNumPredictors; ++i) {
            const auto& col = schema()[i];
            out << ',';
            if (col.is_categorical())
                out << col.categories[static_cast<std::size_t>(row.x[i])];
            else
                out << csv::fmt(row.x[i]);
        }
        out << '\n';
    }
}

std::vector<FeatureRow> read_features_csv(std::istream& in) {
    std::string first;
    std::getline(in, first);
    const std::string expect = std::string("#schema=") + kSchemaVersion;
    if (first != expect && first != expect + "\r")
        throw SchemaError("feature matrix: schema version mismatch, found '" + first +
                          "', expected '" + expect + "'");
    csv::Table t(in, {"game_id", "play_id", "frame_index", "t", "candidate_id", "label"},
                 "feature matrix");
    std::vector<FeatureRow> rows;
    while (t.next()) {
        FeatureRow row;
        row.game_id = std::stoll(t.get("game_id"));
        row.play_id = std::stoll(t.get("play_id"));
        row.frame_index = std::stoi(t.get("frame_index"));
        row.t = std::stoi(t.get("t"));
        row.candidate_id = std::stoll(t.get("candidate_id"));
        row.label = std::stod(t.get("label"));
        for (std::size_t i = 0; i < kNumPredictors; ++i) {
            const auto& col = schema()[i];
            const std::string& cell = t.get(col.name);
            if (col.is_categorical()) {
                const int code = category_code(col, cell);
                if (code < 0)
                    throw SchemaError("feature matrix: unknown category '" + cell + "' in column " +
                                      col.name);
                row.x[i] = code;
            } else {
                row.x[i] = std::stod(cell);
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace passprob::features
