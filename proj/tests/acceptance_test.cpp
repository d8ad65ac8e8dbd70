// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion;
// criteria 11-14 need the real tracking corpus (set PASSPROB_DATA_DIR) and
// are reported as SKIP when it is absent.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "passprob/calibration.hpp"
#include "passprob/completion.hpp"
#include "passprob/cv.hpp"
#include "passprob/dataset.hpp"
#include "passprob/feature_builder.hpp"
#include "passprob/forest.hpp"
#include "passprob/geometry.hpp"
#include "passprob/ingest.hpp"
#include "passprob/metrics.hpp"
#include "passprob/synthetic.hpp"
#include "passprob/target_engine.hpp"

using namespace passprob;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what;
    if (!ok && !detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

void skip(int criterion, const std::string& what) {
    std::cout << "SKIP criterion " << criterion << ": " << what
              << " (set PASSPROB_DATA_DIR to run)" << std::endl;
}

void run(int criterion, const std::string& what, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = e.what();
    }
    report(criterion, ok, what, detail);
}

// --- criterion bodies ------------------------------------------------------

bool c1_eq12(std::string& detail) {
    std::vector<target::FrameDistances> corpus;
    for (double v : {3.0, 3.0, 2.0, 6.0, 6.0, 1.0, 8.0}) {
        target::FrameDistances fd;
        fd.candidate_ids = {1};
        fd.d1 = {0.5};
        fd.d2 = {v};
        fd.d3 = {v};
        fd.d4 = {v};
        corpus.push_back(fd);
    }
    auto sched = target::WeightSchedule::fit(corpus, 2, 1);
    const std::vector<double> expect{0.5, 0.5, 0.25, 0.75, 0.75, 0.0, 1.0};
    for (std::size_t j = 0; j < corpus.size(); ++j) {
        if (sched.weight(corpus[j]) != expect[j]) {
            detail = "frame " + std::to_string(j);
            return false;
        }
    }
    return true;
}

bool c2_eq7(std::string& detail) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dist(1e-9, 100.0);
    std::uniform_int_distribution<int> nd(1, 5);
    for (int it = 0; it < 10000; ++it) {
        const int n = nd(rng);
        std::vector<double> d(n);
        for (auto& v : d) v = dist(rng);
        auto p = target::empirical_prob(d);
        double sum = 0;
        for (double v : p) sum += v;
        if (std::fabs(sum - 1.0) > 1e-9) { detail = "sum"; return false; }
        const std::size_t amax = std::max_element(p.begin(), p.end()) - p.begin();
        const std::size_t dmin = std::min_element(d.begin(), d.end()) - d.begin();
        if (d[amax] != d[dmin]) { detail = "argmax"; return false; }
        for (double c : {0.01, 1.0, 100.0}) {
            std::vector<double> scaled(d);
            for (auto& v : scaled) v *= c;
            auto q = target::empirical_prob(scaled);
            for (int i = 0; i < n; ++i)
                if (std::fabs(q[i] - p[i]) > 1e-12) { detail = "scale invariance"; return false; }
        }
    }
    return true;
}

bool c3_eq15(std::string& detail) {
    target::Posterior post;
    post.candidate_ids = {1, 2, 3, 4, 5};
    post.p = {0.477, 0.101, 0.314, 0.049, 0.059};
    post.predicted = 0;
    auto fc = completion::total_completion(post, {0.786, 0.480, 0.436, 0.190, 0.158});
    if (std::fabs(fc.p_complete - 0.579) > 5e-4) {
        detail = "got " + std::to_string(fc.p_complete);
        return false;
    }
    target::Posterior mass;
    mass.candidate_ids = {1, 2, 3, 4, 5};
    mass.p = {1.0, 0.0, 0.0, 0.0, 0.0};
    auto fc2 = completion::total_completion(mass, {0.524, 0.2, 0.3, 0.4, 0.5});
    if (fc2.p_complete != 0.524) { detail = "point mass not exact"; return false; }
    return true;
}

bool c4_w23(std::string& detail) {
    if (std::fabs(target::w23(13.34183) - 0.5) > 1e-12) { detail = "midpoint"; return false; }
    double prev = -1.0;
    for (int t = 1; t <= 46; ++t) {
        const double w = target::w23(t);
        if (w <= prev) { detail = "not increasing at t=" + std::to_string(t); return false; }
        prev = w;
    }
    return true;
}

bool c5_auc(std::string& detail) {
    std::mt19937_64 rng(107);
    std::uniform_int_distribution<int> nd(2, 30), sd(0, 7);
    int done = 0;
    while (done < 200) {
        const int n = nd(rng);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        bool h0 = false, h1 = false;
        for (int i = 0; i < n; ++i) {
            scores[i] = sd(rng) / 8.0;
            labels[i] = static_cast<int>(rng() & 1);
            (labels[i] ? h1 : h0) = true;
        }
        if (!h0 || !h1) continue;
        ++done;
        double num = 0.0;
        long pairs = 0;
        for (int i = 0; i < n; ++i) {
            if (labels[i] != 1) continue;
            for (int j = 0; j < n; ++j) {
                if (labels[j] != 0) continue;
                ++pairs;
                num += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
            }
        }
        if (model::auc_trapezoid(scores, labels) != num / pairs) {
            detail = "instance " + std::to_string(done);
            return false;
        }
    }
    return true;
}

bool c6_geometry(std::string& detail) {
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    for (int i = 0; i < 1000; ++i) {
        geom::Point2 p0{d(rng), d(rng)}, p1{d(rng), d(rng)}, p2{d(rng), d(rng)};
        const double vx = p2.x - p1.x, vy = p2.y - p1.y;
        if (std::hypot(vx, vy) < 1e-6) continue;
        const double t = ((p0.x - p1.x) * vx + (p0.y - p1.y) * vy) / (vx * vx + vy * vy);
        const double oracle = std::hypot(p0.x - (p1.x + t * vx), p0.y - (p1.y + t * vy));
        const double got = geom::point_to_line_distance(p0, p1, p2);
        if (std::fabs(got - oracle) > 1e-9) { detail = "projection oracle"; return false; }
        const double theta = ang(rng), tx = d(rng), ty = d(rng);
        auto rot = [&](geom::Point2 p) {
            return geom::Point2{p.x * std::cos(theta) - p.y * std::sin(theta) + tx,
                                p.x * std::sin(theta) + p.y * std::cos(theta) + ty};
        };
        if (std::fabs(geom::point_to_line_distance(rot(p0), rot(p1), rot(p2)) - got) > 1e-9) {
            detail = "rigid motion";
            return false;
        }
    }
    return true;
}

bool c7_folds(std::string& detail) {
    std::mt19937_64 rng(113);
    for (int it = 0; it < 100; ++it) {
        const int n = 12 + static_cast<int>(rng() % 300);
        const int folds = (it % 2) ? 5 : 10;
        std::vector<std::int64_t> keys;
        for (int i = 0; i < n; ++i) keys.push_back(i * 7 + 3);
        auto plan = model::FoldPlan::make(keys, folds, rng());
        if (static_cast<int>(plan.fold_of.size()) != n) { detail = "partition"; return false; }
        for (const auto& [k, f] : plan.fold_of)
            if (f < 0 || f >= folds) { detail = "fold range"; return false; }
        // every play is in exactly one fold by construction of the map; check
        // train/test disjointness explicitly for each fold
        for (int f = 0; f < folds; ++f) {
            std::set<std::int64_t> test, train;
            for (const auto& [k, kf] : plan.fold_of) (kf == f ? test : train).insert(k);
            for (std::int64_t k : test)
                if (train.count(k)) { detail = "straddling play"; return false; }
        }
    }
    return true;
}

bool c8_classifiers(std::string& detail) {
    auto heldout = [](const model::Dataset& data, model::Method method) {
        std::set<std::int64_t> keys(data.group.begin(), data.group.end());
        auto plan = model::FoldPlan::make({keys.begin(), keys.end()}, 5, 3);
        std::vector<std::size_t> train, test;
        for (std::size_t r = 0; r < data.rows(); ++r)
            (plan.fold_of.at(data.group[r]) == 0 ? test : train).push_back(r);
        model::ForestConfig cfg;
        cfg.n_trees = 60;
        cfg.mtry = 5;
        cfg.seed = 11;
        auto scores = model::fit_and_score(method, data, train, test, cfg);
        std::vector<int> labels;
        for (std::size_t r : test) labels.push_back(data.y[r]);
        return model::auc_trapezoid(scores, labels);
    };

    model::Dataset sep;
    sep.cols = 3;
    sep.n_categories = {0, 0, 0};
    std::mt19937_64 rng(127);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 400; ++i) {
        const int label = i % 2;
        sep.add_row({g(rng) + label * 3.0, g(rng) + label * 3.0, g(rng)}, label, i / 4);
    }
    for (auto method : model::all_methods()) {
        const double auc = heldout(sep, method);
        if (auc < 0.95) {
            detail = std::string(model::method_name(method)) + " auc " + std::to_string(auc);
            return false;
        }
    }

    model::Dataset xo;
    xo.cols = 2;
    xo.n_categories = {0, 0};
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 0.1);
    for (int i = 0; i < 600; ++i) {
        const double a = u(rng), b = u(rng);
        xo.add_row({a + jitter(rng), b + jitter(rng)}, (a > 0) != (b > 0) ? 1 : 0, i / 4);
    }
    const double rf = heldout(xo, model::Method::RandomForest);
    const double lg = heldout(xo, model::Method::GlmLogit);
    if (rf - lg < 0.15) {
        detail = "XOR margin " + std::to_string(rf - lg);
        return false;
    }
    return true;
}

bool c9_synthetic(std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "passprob_accept_synth";
    fs::remove_all(dir);
    fs::create_directories(dir);
    synth::SynthConfig cfg;
    cfg.n_plays = 40;
    cfg.noise = 0.0;
    cfg.seed = 7;
    synth::generate(cfg, dir.string());
    auto corpus = ingest::load_and_normalize(synth::paths_for(dir.string()));
    fs::remove_all(dir);
    if (corpus.plays.empty()) { detail = "no plays ingested"; return false; }

    std::vector<target::PlayPanel> panels;
    std::vector<target::FrameDistances> flat;
    for (const auto& play : corpus.plays) {
        auto pr = target::build_distance_panel(play);
        if (pr.frames.empty()) { detail = "empty panel"; return false; }
        panels.push_back({&play, pr.frames});
        flat.insert(flat.end(), pr.frames.begin(), pr.frames.end());
    }
    auto sched = target::ScheduleSet::fit(flat);
    for (const auto& panel : panels) {
        double prev = -1.0;
        for (const auto& fd : panel.frames) {
            auto post = target::proximity_adjust(
                target::target_posterior(fd, sched, target::Scheme::Final), fd);
            std::size_t truth = fd.size();
            for (std::size_t i = 0; i < fd.size(); ++i)
                if (fd.candidate_ids[i] == panel.play->record.target_id) truth = i;
            if (truth == fd.size()) { detail = "target not a candidate"; return false; }
            if (post.predicted != truth) { detail = "misprediction"; return false; }
            if (post.p[truth] < prev - 1e-12) { detail = "confidence dipped"; return false; }
            prev = post.p[truth];
        }
    }
    return true;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool c10_determinism(const std::string& cli, std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "passprob_accept_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto sh = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const std::string out = dir.string();
    if (!sh("gen-synthetic --out-dir " + out + " --plays 30 --seed 5") ||
        !sh("ingest --input-dir " + out + " --out-dir " + out) ||
        !sh("target-probs --out-dir " + out) || !sh("features --out-dir " + out)) {
        detail = "pipeline setup failed";
        return false;
    }
    const std::string train = "train --out-dir " + out + " --trees 40 --mtry 5 --seed 9";
    const std::string predict = "predict --out-dir " + out;
    if (!sh(train) || !sh(predict)) { detail = "first run failed"; return false; }
    const std::string forest1 = slurp(dir / "forest.json");
    const std::string frames1 = slurp(dir / "frame_completions.csv");
    if (!sh(train) || !sh(predict)) { detail = "second run failed"; return false; }
    const bool same =
        forest1 == slurp(dir / "forest.json") && frames1 == slurp(dir / "frame_completions.csv");
    if (!same) detail = "artifacts differ between runs";
    fs::remove_all(dir);
    return same && !forest1.empty() && !frames1.empty();
}

// --- dataset-gated criteria ------------------------------------------------

ingest::Paths data_paths(const std::string& dir, int max_weeks) {
    ingest::Paths p;
    p.games = dir + "/games.csv";
    p.players = dir + "/players.csv";
    p.plays = dir + "/plays.csv";
    for (int w = 1; w <= max_weeks; ++w) {
        const std::string f = dir + "/week" + std::to_string(w) + ".csv";
        if (fs::exists(f)) p.tracking.push_back(f);
    }
    return p;
}

struct CorpusArtifacts {
    ingest::Corpus corpus;
    std::vector<target::PlayPanel> panels;
    std::vector<target::FrameDistances> flat;
    target::ScheduleSet schedules;
};

CorpusArtifacts prepare(const std::string& data_dir, int max_weeks) {
    CorpusArtifacts art;
    art.corpus = ingest::load_and_normalize(data_paths(data_dir, max_weeks));
    for (const auto& play : art.corpus.plays) {
        auto pr = target::build_distance_panel(play);
        if (pr.frames.empty()) continue;
        art.panels.push_back({&play, pr.frames});
        art.flat.insert(art.flat.end(), pr.frames.begin(), pr.frames.end());
    }
    art.schedules = target::ScheduleSet::fit(art.flat);
    return art;
}

bool c11_target_accuracy(const CorpusArtifacts& art, std::string& detail) {
    auto report = target::evaluate_target_accuracy(art.panels, art.schedules);
    double final_acc = -1, w2_acc = -1;
    for (const auto& row : report.rows) {
        if (row.scheme == "final") final_acc = row.after_adjust;
        if (row.scheme == "W2") w2_acc = row.after_adjust;
    }
    std::ostringstream os;
    os << "final " << final_acc << ", W2 " << w2_acc;
    detail = os.str();
    return std::fabs(final_acc - 0.8692) <= 0.01 && std::fabs(w2_acc - 0.8668) <= 0.01;
}

bool c12_forest_auc(const CorpusArtifacts& art, std::string& detail) {
    auto rows = features::build_training_rows(art.panels);
    auto data = model::Dataset::from_feature_rows(rows);
    model::ForestConfig cfg;
    cfg.n_trees = 500;
    cfg.mtry = 15;
    cfg.seed = 1;
    auto report = model::run_benchmark(data, model::all_methods(), {10}, 1, cfg);
    double rf_auc = -1;
    for (const auto& cell : report.cells)
        if (cell.method == model::Method::RandomForest) rf_auc = cell.auc;
    std::ostringstream os;
    os << "RF AUC " << rf_auc;
    detail = os.str();
    const bool ordering = !report.cells.empty() &&
                          report.cells.front().method == model::Method::RandomForest &&
                          report.cells.back().method == model::Method::Qda;
    return std::fabs(rf_auc - 0.8829) <= 0.04 && ordering;
}

bool c13_threshold_and_calibration(const CorpusArtifacts& art, std::string& detail) {
    auto rows = features::build_training_rows(art.panels);
    auto data = model::Dataset::from_feature_rows(rows);
    model::ForestConfig cfg;
    cfg.n_trees = 500;
    cfg.mtry = 15;
    cfg.seed = 1;
    auto forest = model::Forest::train(data, model::all_rows(data), cfg);

    std::vector<double> probs;
    std::vector<int> outcomes;
    std::vector<calibration::Row> frame_general, frame_pred;
    for (const auto& panel : art.panels) {
        const Play& play = *panel.play;
        auto cand_rows = features::build_candidate_rows(panel);
        std::map<std::pair<int, EntityId>, double> score;
        for (const auto& fr : cand_rows)
            score[{fr.frame_index, fr.candidate_id}] = forest.predict_row(fr.x.data());
        const std::int64_t key = play.record.game_id * 1000000 + play.record.play_id;
        const int y = is_complete(play.record.outcome) ? 1 : 0;
        for (const auto& fd : panel.frames) {
            auto post = target::proximity_adjust(
                target::target_posterior(fd, art.schedules, target::Scheme::Final), fd);
            std::vector<double> cond;
            bool full = true;
            for (EntityId id : fd.candidate_ids) {
                auto it = score.find({fd.frame_index, id});
                if (it == score.end()) { full = false; break; }
                cond.push_back(it->second);
            }
            if (!full) continue;
            auto fc = completion::total_completion(post, cond);
            probs.push_back(fc.p_complete_given_predicted);
            outcomes.push_back(y);
            frame_general.push_back({key, fc.p_complete, y});
            frame_pred.push_back({key, fc.p_complete_given_predicted, y});
        }
    }
    const double acc = completion::threshold_accuracy(probs, outcomes);

    const double expect_r[4] = {0.978, 0.998, 0.958, 0.980};
    const double expect_cc[4] = {0.958, 0.998, 0.903, 0.942};
    const calibration::Mode modes[4] = {calibration::Mode::FrameGeneral,
                                        calibration::Mode::FramePredicted,
                                        calibration::Mode::PlayGeneral,
                                        calibration::Mode::PlayPredicted};
    bool cal_ok = true;
    std::ostringstream os;
    os << "acc " << acc;
    for (int i = 0; i < 4; ++i) {
        const auto& rows_i = (i % 2 == 0) ? frame_general : frame_pred;
        auto rep = calibration::calibrate(rows_i, modes[i]);
        os << "; " << calibration::mode_name(modes[i]) << " r=" << rep.pearson
           << " cc=" << rep.lin_concordance;
        cal_ok = cal_ok && std::fabs(rep.pearson - expect_r[i]) <= 0.02 &&
                 std::fabs(rep.lin_concordance - expect_cc[i]) <= 0.02;
    }
    detail = os.str();
    return std::fabs(acc - 0.958) <= 0.01 && cal_ok;
}

bool c14_window_lengths(const CorpusArtifacts& art, std::string& detail) {
    std::vector<int> lens;
    for (const auto& play : art.corpus.plays) lens.push_back(play.window_len());
    std::sort(lens.begin(), lens.end());
    if (lens.empty()) { detail = "no plays"; return false; }
    const int lo = lens.front(), hi = lens.back();
    const int p75 = lens[static_cast<std::size_t>(0.75 * (lens.size() - 1))];
    const int p95 = lens[static_cast<std::size_t>(0.95 * (lens.size() - 1))];
    std::ostringstream os;
    os << "range [" << lo << "," << hi << "], p75 " << p75 << ", p95 " << p95;
    detail = os.str();
    return lo >= 1 && hi <= 46 && p75 <= 17 && p95 <= 26;
}

}  // namespace

int main(int argc, char** argv) {
    run(1, "Eq. 12 seven-frame worked example", c1_eq12);
    run(2, "Eq. 7 normalization, scale invariance, argmax over 10k frames", c2_eq7);
    run(3, "Eq. 15 reproduction (0.579 within 5e-4; 0.524 exact)", c3_eq15);
    run(4, "Eq. 13 midpoint and strict monotonicity", c4_w23);
    run(5, "trapezoidal AUC equals pairwise concordance on 200 instances", c5_auc);
    run(6, "geometry projection-residual oracle and rigid-motion invariance", c6_geometry);
    run(7, "fold plans partition plays with no train/test straddling", c7_folds);
    run(8, "classifier sanity: separable AUC >= 0.95; forest beats logit on XOR", c8_classifiers);
    run(9, "zero-noise synthetic: 100% target accuracy, monotone confidence", c9_synthetic);

    const char* cli = argc > 1 ? argv[1] : std::getenv("PASSPROB_CLI");
    if (cli) {
        run(10, "train + predict twice with one seed -> identical bytes",
            [&](std::string& d) { return c10_determinism(cli, d); });
    } else {
        report(10, false, "determinism", "CLI binary path not provided");
    }

    const char* data_dir = std::getenv("PASSPROB_DATA_DIR");
    if (!data_dir) {
        skip(11, "target accuracy vs published table");
        skip(12, "random forest LGOCV AUC and method ordering");
        skip(13, "threshold accuracy and calibration agreement");
        skip(14, "pass-window length percentiles");
    } else {
        try {
            // desk-scale subset keeps criterion 12 under its runtime budget
            CorpusArtifacts art = prepare(data_dir, 17);
            run(11, "target accuracy vs published table",
                [&](std::string& d) { return c11_target_accuracy(art, d); });
            CorpusArtifacts desk = prepare(data_dir, 2);
            run(12, "random forest LGOCV AUC and method ordering (weeks 1-2)",
                [&](std::string& d) { return c12_forest_auc(desk, d); });
            run(13, "threshold accuracy and calibration agreement (weeks 1-2)",
                [&](std::string& d) { return c13_threshold_and_calibration(desk, d); });
            run(14, "pass-window length percentiles",
                [&](std::string& d) { return c14_window_lengths(art, d); });
        } catch (const std::exception& e) {
            report(11, false, "dataset preparation", e.what());
            report(12, false, "dataset preparation", e.what());
            report(13, false, "dataset preparation", e.what());
            report(14, false, "dataset preparation", e.what());
        }
    }

    std::cout << (g_failures == 0 ? "ALL ACCEPTANCE CHECKS PASSED" : "FAILURES: ")
              << (g_failures == 0 ? std::string() : std::to_string(g_failures)) << std::endl;
    return g_failures == 0 ? 0 : 1;
}
