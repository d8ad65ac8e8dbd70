#include "passprob/target_engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "passprob/csv.hpp"
#include "passprob/errors.hpp"

namespace passprob::target {

using nlohmann::json;

PanelResult build_distance_panel(const Play& play) {
    PanelResult result;
    const auto& frames = play.frames;
    const auto& rec = play.record;

    // position of the first window frame in the frame list
    std::size_t first_pos = frames.size();
    for (std::size_t i = 0; i < frames.size(); ++i)
        if (frames[i].frame_index == rec.window_first) { first_pos = i; break; }
    if (first_pos == frames.size() || first_pos == 0) {
        result.dropped_frames = play.window_len();
        return result;
    }

    int t = 0;
    for (std::size_t pos = first_pos;
         pos < frames.size() && frames[pos].frame_index <= rec.window_last; ++pos, ++t) {
        const TrackingFrame& now = frames[pos];
        const TrackingFrame& prev = frames[pos - 1];
        const Entity* ball_now = now.ball();
        const Entity* ball_prev = prev.ball();
        if (!ball_now || !ball_prev) { result.dropped_frames++; continue; }

        // Most recent frame whose ball position differs from the current one
        // defines the motion line.
        const Entity* line_prev = nullptr;
        for (std::size_t back = pos; back-- > 0;) {
            const Entity* b = frames[back].ball();
            if (b && (b->x != ball_now->x || b->y != ball_now->y)) { line_prev = b; break; }
        }
        if (!line_prev) { result.dropped_frames++; continue; }

        FrameDistances fd;
        fd.game_id = rec.game_id;
        fd.play_id = rec.play_id;
        fd.frame_index = now.frame_index;
        fd.t = t + 1;
        for (EntityId id : rec.candidates) {
            const Entity* e_now = now.find(id);
            const Entity* e_prev = prev.find(id);
            if (!e_now || !e_prev) continue;
            const double d4 = geom::euclidean(e_now->point(), ball_now->point());
            const double h_prev = geom::euclidean(e_prev->point(), ball_prev->point());
            const double d1 = std::max(
                geom::point_to_line_distance(e_now->point(), line_prev->point(), ball_now->point()),
                kLineDistanceFloor);
            fd.candidate_ids.push_back(id);
            fd.d1.push_back(d1);
            fd.d3.push_back(geom::frame_delta(d4, h_prev));
            fd.d4.push_back(d4);
        }
        if (fd.candidate_ids.empty()) { result.dropped_frames++; continue; }

        // Eq-style standardisation of the d3 column so every value is >= 1.
        const double mn = *std::min_element(fd.d3.begin(), fd.d3.end());
        fd.d2.resize(fd.d3.size());
        for (std::size_t i = 0; i < fd.d3.size(); ++i) {
            fd.d2[i] = mn > 0 ? fd.d3[i] + 1 + std::fabs(mn) : fd.d3[i] + 1 - mn;
        }
        result.frames.push_back(std::move(fd));
    }
    return result;
}

std::vector<double> empirical_prob(const std::vector<double>& distances) {
    if (distances.empty()) throw NumericalError("empirical_prob: empty distance column");
    double inv_sum = 0.0;
    for (double d : distances) {
        if (!(d > 0.0)) throw NumericalError("empirical_prob: non-positive distance");
        inv_sum += 1.0 / d;
    }
    std::vector<double> p(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) p[i] = 1.0 / (distances[i] * inv_sum);
    return p;
}

std::vector<double> blend(const std::vector<double>& p1, const std::vector<double>& p2, double w) {
    if (p1.size() != p2.size()) throw NumericalError("blend: probability vector length mismatch");
    std::vector<double> out(p1.size());
    for (std::size_t i = 0; i < p1.size(); ++i) out[i] = w * p1[i] + (1.0 - w) * p2[i];
    return out;
}

double w23(double t, const LogisticParams& params) {
    return 1.0 / (1.0 + std::exp((params.midpoint - t) / params.scale));
}

WeightSchedule::WeightSchedule(int value_k, int selector_s, std::vector<double> sorted_unique)
    : value_k_(value_k), selector_s_(selector_s), unique_(std::move(sorted_unique)) {}

double WeightSchedule::d_star(const FrameDistances& fd) const {
    const std::vector<double>& sel = selector_s_ == 1 ? fd.d1 : fd.d2;
    const std::vector<double>& val = value_k_ == 2 ? fd.d2 : value_k_ == 3 ? fd.d3 : fd.d4;
    const std::size_t i = static_cast<std::size_t>(
        std::min_element(sel.begin(), sel.end()) - sel.begin());
    return val[i];
}

WeightSchedule WeightSchedule::fit(const std::vector<FrameDistances>& corpus, int value_k,
                                   int selector_s) {
    WeightSchedule ws(value_k, selector_s, {});
    ws.unique_.reserve(corpus.size());
    for (const auto& fd : corpus) ws.unique_.push_back(ws.d_star(fd));
    std::sort(ws.unique_.begin(), ws.unique_.end());
    ws.unique_.erase(std::unique(ws.unique_.begin(), ws.unique_.end()), ws.unique_.end());
    return ws;
}

double WeightSchedule::weight_for(double d_star_value) const {
    const std::size_t u = unique_.size();
    if (u <= 1) return 0.5;  // degenerate rank set
    const auto below = static_cast<double>(
        std::lower_bound(unique_.begin(), unique_.end(), d_star_value) - unique_.begin());
    return std::min(below / static_cast<double>(u - 1), 1.0);
}

ScheduleSet ScheduleSet::fit(const std::vector<FrameDistances>& corpus) {
    ScheduleSet s;
    s.w1 = WeightSchedule::fit(corpus, 3, 1);
    s.w2 = WeightSchedule::fit(corpus, 2, 1);
    s.w3 = WeightSchedule::fit(corpus, 4, 1);
    s.w4 = WeightSchedule::fit(corpus, 4, 2);
    return s;
}

namespace {
json schedule_to_json(const WeightSchedule& ws) {
    return json{{"k", ws.value_k()}, {"s", ws.selector_s()}, {"U", ws.unique_values()}};
}
WeightSchedule schedule_from_json(const json& j) {
    return WeightSchedule(j.at("k").get<int>(), j.at("s").get<int>(),
                          j.at("U").get<std::vector<double>>());
}
}  // namespace

std::string ScheduleSet::to_json() const {
    json j{{"v", "schedules-v1"},
           {"w1", schedule_to_json(w1)},
           {"w2", schedule_to_json(w2)},
           {"w3", schedule_to_json(w3)},
           {"w4", schedule_to_json(w4)},
           {"logistic", {{"asymptote", 1.0}, {"midpoint", logistic.midpoint}, {"scale", logistic.scale}}}};
    return j.dump();
}

ScheduleSet ScheduleSet::from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("v", "") != "schedules-v1")
        throw SchemaError("schedule artifact: unknown schema version, expected 'schedules-v1'");
    ScheduleSet s;
    s.w1 = schedule_from_json(j.at("w1"));
    s.w2 = schedule_from_json(j.at("w2"));
    s.w3 = schedule_from_json(j.at("w3"));
    s.w4 = schedule_from_json(j.at("w4"));
    s.logistic.midpoint = j.at("logistic").at("midpoint").get<double>();
    s.logistic.scale = j.at("logistic").at("scale").get<double>();
    return s;
}

std::size_t predicted_index(const std::vector<double>& p, const FrameDistances& fd) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i] > p[best]) { best = i; continue; }
        if (p[i] == p[best]) {
            if (fd.d4[i] < fd.d4[best] ||
                (fd.d4[i] == fd.d4[best] && fd.candidate_ids[i] < fd.candidate_ids[best]))
                best = i;
        }
    }
    return best;
}

Posterior target_posterior(const FrameDistances& fd, const ScheduleSet& schedules, Scheme scheme) {
    const std::vector<double> p1 = empirical_prob(fd.d1);
    const std::vector<double> p2 = empirical_prob(fd.d2);

    std::vector<double> p;
    switch (scheme) {
        case Scheme::EqualWeights:
            p = blend(p1, p2, 0.5);
            break;
        case Scheme::W1:
            p = blend(p1, p2, schedules.w1.weight(fd));
            break;
        case Scheme::W2:
            p = blend(p1, p2, schedules.w2.weight(fd));
            break;
        case Scheme::W3:
            p = blend(p1, p2, schedules.w3.weight(fd));
            break;
        case Scheme::W4:
            p = blend(p1, p2, 1.0 - schedules.w4.weight(fd));
            break;
        case Scheme::Final: {
            const double wt = w23(fd.t, schedules.logistic);
            const std::vector<double> f3 = blend(p1, p2, schedules.w3.weight(fd));
            const std::vector<double> f2 = blend(p1, p2, schedules.w2.weight(fd));
            p = blend(f3, f2, wt);
            break;
        }
    }

    Posterior post;
    post.game_id = fd.game_id;
    post.play_id = fd.play_id;
    post.frame_index = fd.frame_index;
    post.t = fd.t;
    post.candidate_ids = fd.candidate_ids;
    post.predicted = predicted_index(p, fd);
    post.p = std::move(p);
    return post;
}

Posterior proximity_adjust(const Posterior& posterior, const FrameDistances& fd) {
    std::vector<std::size_t> qualifiers;
    for (std::size_t i = 0; i < fd.size(); ++i)
        if (fd.d1[i] < 2.0 && fd.d4[i] < 2.0) qualifiers.push_back(i);
    if (qualifiers.empty()) return posterior;

    std::size_t top = qualifiers[0];
    for (std::size_t q : qualifiers) {
        if (posterior.p[q] > posterior.p[top]) top = q;
        else if (posterior.p[q] == posterior.p[top] &&
                 (fd.d4[q] < fd.d4[top] ||
                  (fd.d4[q] == fd.d4[top] && fd.candidate_ids[q] < fd.candidate_ids[top])))
            top = q;
    }

    Posterior out = posterior;
    double transferred = 0.0;
    for (std::size_t i = 0; i < out.p.size(); ++i) {
        if (fd.d1[i] < 2.0 && fd.d4[i] < 2.0) continue;  // qualifiers keep their mass
        transferred += out.p[i];
        out.p[i] = 0.0;
    }
    out.p[top] += transferred;
    out.predicted = predicted_index(out.p, fd);
    return out;
}

namespace {

struct SchemeSpec {
    Scheme scheme;
    const char* name;
};

constexpr SchemeSpec kSchemes[] = {
    {Scheme::EqualWeights, "EW"}, {Scheme::W1, "W1"}, {Scheme::W2, "W2"},
    {Scheme::W3, "W3"},           {Scheme::W4, "W4"}, {Scheme::Final, "final"},
};

}  // namespace

AccuracyReport evaluate_target_accuracy(const std::vector<PlayPanel>& panels,
                                        const ScheduleSet& schedules, int max_n) {
    AccuracyReport report;

    for (const auto& spec : kSchemes) {
        AccuracyRow row;
        row.scheme = spec.name;
        long correct_before = 0, correct_after = 0, total = 0;
        for (const auto& pp : panels) {
            for (const auto& fd : pp.frames) {
                Posterior post = target_posterior(fd, schedules, spec.scheme);
                Posterior adj = proximity_adjust(post, fd);
                const EntityId truth = pp.play->record.target_id;
                if (fd.candidate_ids[post.predicted] == truth) ++correct_before;
                if (fd.candidate_ids[adj.predicted] == truth) ++correct_after;
                ++total;
            }
        }
        row.frames = total;
        row.before_adjust = total ? static_cast<double>(correct_before) / total : 0.0;
        row.after_adjust = total ? static_cast<double>(correct_after) / total : 0.0;
        report.rows.push_back(std::move(row));
    }

    // First-n / last-n curves for the Final scheme after adjustment.
    std::vector<long> first_total(max_n + 1, 0), first_ok(max_n + 1, 0);
    std::vector<long> last_total(max_n + 1, 0), last_ok(max_n + 1, 0);
    for (const auto& pp : panels) {
        const int len = static_cast<int>(pp.frames.size());
        for (int idx = 0; idx < len; ++idx) {
            const auto& fd = pp.frames[idx];
            Posterior adj = proximity_adjust(target_posterior(fd, schedules, Scheme::Final), fd);
            const bool ok = fd.candidate_ids[adj.predicted] == pp.play->record.target_id;
            const int from_start = idx + 1;
            const int from_end = len - idx;
            if (from_start <= max_n) {
                first_total[from_start]++;
                first_ok[from_start] += ok;
            }
            if (from_end <= max_n) {
                last_total[from_end]++;
                last_ok[from_end] += ok;
            }
        }
    }
    report.curves.first_n.resize(max_n);
    report.curves.last_n.resize(max_n);
    long ft = 0, fo = 0, lt = 0, lo = 0;
    for (int n = 1; n <= max_n; ++n) {
        ft += first_total[n];
        fo += first_ok[n];
        lt += last_total[n];
        lo += last_ok[n];
        report.curves.first_n[n - 1] = ft ? static_cast<double>(fo) / ft : 0.0;
        report.curves.last_n[n - 1] = lt ? static_cast<double>(lo) / lt : 0.0;
    }
    return report;
}

double refit_w23_scale(const std::vector<PlayPanel>& panels, ScheduleSet schedules, double lo,
                       double hi, double step) {
    double best_scale = schedules.logistic.scale;
    double best_acc = -1.0;
    for (double scale = lo; scale <= hi + 1e-12; scale += step) {
        schedules.logistic.scale = scale;
        long correct = 0, total = 0;
        for (const auto& pp : panels) {
            for (const auto& fd : pp.frames) {
                Posterior adj =
                    proximity_adjust(target_posterior(fd, schedules, Scheme::Final), fd);
                if (fd.candidate_ids[adj.predicted] == pp.play->record.target_id) ++correct;
                ++total;
            }
        }
        const double acc = total ? static_cast<double>(correct) / total : 0.0;
        if (acc > best_acc) {
            best_acc = acc;
            best_scale = scale;
        }
    }
    return best_scale;
}

void write_posterior_csv(std::ostream& out, const std::vector<Posterior>& posteriors) {
    out << "game_id,play_id,frame_index,t,candidate_id,p_target,predicted_flag\n";
    for (const auto& post : posteriors) {
        for (std::size_t i = 0; i < post.p.size(); ++i) {
            out << post.game_id << ',' << post.play_id << ',' << post.frame_index << ',' << post.t
                << ',' << post.candidate_ids[i] << ',' << csv::fmt(post.p[i]) << ','
                << (i == post.predicted ? 1 : 0) << '\n';
        }
    }
}

}  // namespace passprob::target
