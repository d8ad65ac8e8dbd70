#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "passprob/calibration.hpp"
#include "passprob/completion.hpp"
#include "passprob/csv.hpp"
#include "passprob/cv.hpp"
#include "passprob/dataset.hpp"
#include "passprob/errors.hpp"
#include "passprob/feature_builder.hpp"
#include "passprob/forest.hpp"
#include "passprob/ingest.hpp"
#include "passprob/render.hpp"
#include "passprob/synthetic.hpp"
#include "passprob/target_engine.hpp"

namespace fs = std::filesystem;
using namespace passprob;

namespace {

struct Options {
    std::string input_dir;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int folds = 10;
    int mtry = 15;
    int trees = 500;
    double w23_scale = 2.57;
    bool refit_w23 = false;
    int bins = 50;
    std::string format = "csv";  // csv | json | svg

    // render / synth extras
    std::int64_t game_id = 0;
    std::int64_t play_id = 0;
    int first_frame = 0;
    int last_frame = 0;
    int n_plays = 100;
    double noise = 0.0;
    int n_decoys = 3;
    int n_defenders = 3;
    bool symmetric = false;
};

std::string read_text(const std::string& path, const std::string& produced_by) {
    std::ifstream in(path);
    if (!in)
        throw MissingPrerequisiteError("missing artifact " + path + "; run `passprob " +
                                       produced_by + "` first");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingPrerequisiteError("cannot write " + path);
    out << text;
}

ingest::Paths input_paths(const std::string& dir) {
    ingest::Paths p;
    p.games = dir + "/games.csv";
    p.players = dir + "/players.csv";
    p.plays = dir + "/plays.csv";
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("week", 0) == 0 && entry.path().extension() == ".csv")
            p.tracking.push_back(entry.path().string());
    }
    std::sort(p.tracking.begin(), p.tracking.end());
    if (p.tracking.empty())
        throw MissingPrerequisiteError("no week*.csv tracking files in " + dir);
    return p;
}

std::vector<target::PlayPanel> build_panels(const std::vector<Play>& plays) {
    std::vector<target::PlayPanel> panels;
    for (const Play& play : plays) {
        target::PanelResult pr = target::build_distance_panel(play);
        if (pr.frames.empty()) continue;
        panels.push_back({&play, std::move(pr.frames)});
    }
    return panels;
}

target::ScheduleSet load_schedules(const Options& opt) {
    return target::ScheduleSet::from_json(
        read_text(opt.out_dir + "/schedules.json", "target-probs"));
}

model::Forest load_forest(const Options& opt) {
    return model::Forest::from_json(read_text(opt.out_dir + "/forest.json", "train"));
}

// ---------------------------------------------------------------------------

int cmd_gen_synthetic(const Options& opt) {
    fs::create_directories(opt.out_dir);
    synth::SynthConfig cfg;
    cfg.n_plays = opt.n_plays;
    cfg.noise = opt.noise;
    cfg.n_decoys = opt.n_decoys;
    cfg.n_defenders = opt.n_defenders;
    cfg.seed = opt.seed;
    cfg.symmetric_decoys = opt.symmetric;
    synth::generate(cfg, opt.out_dir);
    std::cout << "synthetic dataset: " << cfg.n_plays << " plays -> " << opt.out_dir << "\n";
    return 0;
}

int cmd_ingest(const Options& opt) {
    if (opt.input_dir.empty())
        throw MissingPrerequisiteError("--input-dir is required for ingest");
    fs::create_directories(opt.out_dir);
    ingest::Corpus corpus = ingest::load_and_normalize(input_paths(opt.input_dir));
    ingest::save_store_file(opt.out_dir + "/store.ndjson", corpus,
                            opt.out_dir + "/ingest_report.json");
    std::cout << "retained " << corpus.report.retained << " plays";
    long excluded = 0;
    for (const auto& [k, v] : corpus.report.excluded) excluded += v;
    std::cout << ", excluded " << excluded << " (see ingest_report.json)\n";
    return 0;
}

int cmd_target_probs(const Options& opt) {
    ingest::Corpus corpus = ingest::load_store_file(opt.out_dir + "/store.ndjson");
    auto panels = build_panels(corpus.plays);
    if (panels.empty()) throw NumericalError("no plays with usable pass windows");

    std::vector<target::FrameDistances> flat;
    for (const auto& p : panels) flat.insert(flat.end(), p.frames.begin(), p.frames.end());
    target::ScheduleSet schedules = target::ScheduleSet::fit(flat);
    schedules.logistic.scale = opt.w23_scale;
    if (opt.refit_w23) {
        schedules.logistic.scale = target::refit_w23_scale(panels, schedules);
        std::cout << "refit w23 scale: " << schedules.logistic.scale << "\n";
    }
    write_text(opt.out_dir + "/schedules.json", schedules.to_json());

    target::AccuracyReport report = target::evaluate_target_accuracy(panels, schedules);
    {
        std::ofstream out(opt.out_dir + "/target_accuracy.csv");
        out << "scheme,before_adjust,after_adjust,frames\n";
        for (const auto& row : report.rows)
            out << row.scheme << ',' << csv::fmt(row.before_adjust) << ','
                << csv::fmt(row.after_adjust) << ',' << row.frames << '\n';
    }
    {
        std::ofstream out(opt.out_dir + "/target_accuracy_curves.csv");
        out << "n,first_n,last_n\n";
        for (std::size_t i = 0; i < report.curves.first_n.size(); ++i)
            out << (i + 1) << ',' << csv::fmt(report.curves.first_n[i]) << ','
                << csv::fmt(report.curves.last_n[i]) << '\n';
    }
    {
        std::vector<target::Posterior> posteriors;
        for (const auto& p : panels)
            for (const auto& fd : p.frames)
                posteriors.push_back(target::proximity_adjust(
                    target::target_posterior(fd, schedules, target::Scheme::Final), fd));
        std::ofstream out(opt.out_dir + "/posteriors.csv");
        target::write_posterior_csv(out, posteriors);
    }
    for (const auto& row : report.rows)
        std::cout << row.scheme << ": " << row.before_adjust << " -> " << row.after_adjust
                  << " (adjusted)\n";
    return 0;
}

int cmd_features(const Options& opt) {
    ingest::Corpus corpus = ingest::load_store_file(opt.out_dir + "/store.ndjson");
    auto panels = build_panels(corpus.plays);
    features::BuildStats stats;
    std::vector<features::FeatureRow> rows = features::build_training_rows(panels, &stats);
    if (rows.empty()) throw NumericalError("no feature rows could be built");
    std::ofstream out(opt.out_dir + "/features.csv");
    features::write_features_csv(out, rows);
    std::cout << stats.rows << " feature rows (" << stats.skipped << " skipped)\n";
    return 0;
}

int cmd_train(const Options& opt) {
    std::ifstream in(opt.out_dir + "/features.csv");
    if (!in)
        throw MissingPrerequisiteError("missing artifact " + opt.out_dir +
                                       "/features.csv; run `passprob features` first");
    auto rows = features::read_features_csv(in);
    model::Dataset data = model::Dataset::from_feature_rows(rows);
    model::ForestConfig cfg;
    cfg.n_trees = opt.trees;
    cfg.mtry = opt.mtry;
    cfg.seed = opt.seed;
    model::Forest forest = model::Forest::train(data, model::all_rows(data), cfg);
    write_text(opt.out_dir + "/forest.json", forest.to_json());
    std::cout << "trained " << cfg.n_trees << " trees, OOB error " << forest.oob_error() << "\n";
    return 0;
}

int cmd_evaluate(const Options& opt) {
    std::ifstream in(opt.out_dir + "/features.csv");
    if (!in)
        throw MissingPrerequisiteError("missing artifact " + opt.out_dir +
                                       "/features.csv; run `passprob features` first");
    auto rows = features::read_features_csv(in);
    model::Dataset data = model::Dataset::from_feature_rows(rows);
    model::ForestConfig cfg;
    cfg.n_trees = opt.trees;
    cfg.mtry = opt.mtry;
    cfg.seed = opt.seed;
    model::EvalReport report =
        model::run_benchmark(data, model::all_methods(), {opt.folds}, opt.seed, cfg);
    {
        std::ofstream out(opt.out_dir + "/evaluation.csv");
        model::write_report_csv(out, report);
    }
    {
        std::ofstream out(opt.out_dir + "/roc.csv");
        model::write_roc_csv(out, report);
    }
    for (const auto& cell : report.cells) {
        std::cout << model::method_name(cell.method) << " (" << cell.folds << "-fold): ";
        if (cell.error.empty())
            std::cout << "AUC " << cell.auc << ", acc " << cell.threshold_accuracy << "\n";
        else
            std::cout << "failed: " << cell.error << "\n";
    }
    return 0;
}

// Per-play frame completions for the Fig-9-style prediction path.
std::vector<completion::PlaySeries> compute_completions(const std::vector<Play>& plays,
                                                        const target::ScheduleSet& schedules,
                                                        const model::Forest& forest,
                                                        long* skipped_frames = nullptr) {
    std::vector<completion::PlaySeries> all;
    for (const Play& play : plays) {
        target::PanelResult pr = target::build_distance_panel(play);
        if (pr.frames.empty()) continue;
        target::PlayPanel panel{&play, pr.frames};
        auto cand_rows = features::build_candidate_rows(panel);
        std::map<std::pair<int, EntityId>, double> score;
        for (const auto& fr : cand_rows)
            score[{fr.frame_index, fr.candidate_id}] = forest.predict_row(fr.x.data());

        completion::PlaySeries series;
        series.game_id = play.record.game_id;
        series.play_id = play.record.play_id;
        for (const auto& fd : pr.frames) {
            target::Posterior post = target::proximity_adjust(
                target::target_posterior(fd, schedules, target::Scheme::Final), fd);
            std::vector<double> cond;
            cond.reserve(fd.size());
            bool complete_row = true;
            for (EntityId id : fd.candidate_ids) {
                auto it = score.find({fd.frame_index, id});
                if (it == score.end()) {
                    complete_row = false;
                    break;
                }
                cond.push_back(it->second);
            }
            if (!complete_row) {
                if (skipped_frames) ++*skipped_frames;
                continue;
            }
            series.frames.push_back(completion::total_completion(post, cond));
        }
        if (!series.frames.empty()) all.push_back(std::move(series));
    }
    return all;
}

int cmd_predict(const Options& opt) {
    ingest::Corpus corpus = ingest::load_store_file(opt.out_dir + "/store.ndjson");
    target::ScheduleSet schedules = load_schedules(opt);
    model::Forest forest = load_forest(opt);

    long skipped = 0;
    auto series = compute_completions(corpus.plays, schedules, forest, &skipped);
    if (series.empty()) throw NumericalError("no plays produced frame completions");

    std::map<std::int64_t, Outcome> outcome_of;
    for (const Play& p : corpus.plays)
        outcome_of[p.record.game_id * 1000000 + p.record.play_id] = p.record.outcome;

    std::vector<completion::FrameCompletion> flat;
    std::vector<calibration::Row> general, predicted;
    std::vector<double> play_probs;
    std::vector<int> play_outcomes;
    for (const auto& s : series) {
        const std::int64_t key = s.game_id * 1000000 + s.play_id;
        const int y = is_complete(outcome_of[key]) ? 1 : 0;
        double sum = 0.0;
        for (const auto& fc : s.frames) {
            flat.push_back(fc);
            general.push_back({key, fc.p_complete, y});
            predicted.push_back({key, fc.p_complete_given_predicted, y});
            sum += fc.p_complete;
        }
        play_probs.push_back(sum / s.frames.size());
        play_outcomes.push_back(y);
    }
    {
        std::ofstream out(opt.out_dir + "/frame_completions.csv");
        completion::write_frame_completion_csv(out, flat);
    }
    std::vector<calibration::Report> reports = {
        calibration::calibrate(general, calibration::Mode::FrameGeneral, opt.bins),
        calibration::calibrate(predicted, calibration::Mode::FramePredicted, opt.bins),
        calibration::calibrate(general, calibration::Mode::PlayGeneral, opt.bins),
        calibration::calibrate(predicted, calibration::Mode::PlayPredicted, opt.bins)};
    {
        std::ofstream out(opt.out_dir + "/calibration.csv");
        calibration::write_calibration_csv(out, reports);
    }
    write_text(opt.out_dir + "/calibration_summary.json", calibration::summary_json(reports));

    const double acc = completion::threshold_accuracy(play_probs, play_outcomes);
    std::cout << series.size() << " plays, " << flat.size() << " frames (" << skipped
              << " skipped); play-level threshold accuracy " << acc << "\n";
    return 0;
}

int cmd_render(const Options& opt) {
    ingest::Corpus corpus = ingest::load_store_file(opt.out_dir + "/store.ndjson");
    target::ScheduleSet schedules = load_schedules(opt);
    model::Forest forest = load_forest(opt);

    const Play* play = nullptr;
    for (const Play& p : corpus.plays)
        if (p.record.game_id == opt.game_id && p.record.play_id == opt.play_id) play = &p;
    if (!play) {
        std::ostringstream msg;
        msg << "unknown play " << opt.game_id << "/" << opt.play_id << "; nearest keys:";
        int shown = 0;
        for (const Play& p : corpus.plays) {
            if (shown++ == 5) break;
            msg << ' ' << p.record.game_id << '/' << p.record.play_id;
        }
        throw MissingPrerequisiteError(msg.str());
    }

    auto series = compute_completions({*play}, schedules, forest);
    if (series.empty()) throw NumericalError("play has no usable pass window");

    int first = opt.first_frame > 0 ? opt.first_frame : play->record.window_first;
    int last = opt.last_frame > 0 ? opt.last_frame : play->record.window_last;
    const fs::path dir = fs::path(opt.out_dir) / "render";
    fs::create_directories(dir);

    std::vector<render::OverlayRecord> overlay;
    int rendered = 0;
    for (const auto& fc : series[0].frames) {
        if (fc.frame_index < first || fc.frame_index > last) continue;
        const TrackingFrame* frame = play->frame_at(fc.frame_index);
        if (!frame) continue;
        auto rows = render::overlay_frame(*frame, fc);
        overlay.insert(overlay.end(), rows.begin(), rows.end());
        if (opt.format == "svg") {
            std::ostringstream name;
            name << "frame_" << opt.game_id << '_' << opt.play_id << '_' << fc.frame_index
                 << ".svg";
            write_text((dir / name.str()).string(), render::frame_svg(*frame, fc));
        }
        ++rendered;
    }
    if (rendered == 0) {
        std::cout << "empty frame range [" << first << ", " << last << "]; nothing rendered\n";
        return 0;
    }
    {
        std::ostringstream name;
        name << "overlay_" << opt.game_id << '_' << opt.play_id << ".csv";
        std::ofstream out(dir / name.str());
        render::write_overlay_csv(out, overlay);
    }
    std::cout << "rendered " << rendered << " frames -> " << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frame-by-frame pass completion probability pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file (TOML/INI); CLI flags take precedence");

    Options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", opt.out_dir, "artifact directory")->configurable(true);
        cmd->add_option("--seed", opt.seed, "RNG seed")->configurable(true);
    };

    auto* gen = app.add_subcommand("gen-synthetic", "generate a synthetic tracking dataset");
    add_common(gen);
    gen->add_option("--plays", opt.n_plays, "number of plays")->check(CLI::PositiveNumber);
    gen->add_option("--noise", opt.noise, "positional jitter std dev (yards)")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--decoys", opt.n_decoys)->check(CLI::Range(0, 5));
    gen->add_option("--defenders", opt.n_defenders)->check(CLI::Range(1, 5));
    gen->add_flag("--symmetric", opt.symmetric, "two candidates mirrored about the ball line");

    auto* ing = app.add_subcommand("ingest", "normalize raw tracking CSVs into the play store");
    add_common(ing);
    ing->add_option("--input-dir", opt.input_dir, "directory with games/players/plays/week CSVs");

    auto* tp = app.add_subcommand("target-probs", "fit weight schedules, evaluate target accuracy");
    add_common(tp);
    tp->add_option("--w23-scale", opt.w23_scale)->check(CLI::PositiveNumber);
    tp->add_flag("--refit-w23", opt.refit_w23, "grid-search the logistic scale");

    auto* feat = app.add_subcommand("features", "build the per-frame predictor table");
    add_common(feat);

    auto* train = app.add_subcommand("train", "train the random forest on all feature rows");
    add_common(train);
    train->add_option("--mtry", opt.mtry)->check(CLI::Range(5, 20));
    train->add_option("--trees", opt.trees)->check(CLI::PositiveNumber);

    auto* eval = app.add_subcommand("evaluate", "cross-validated classifier comparison");
    add_common(eval);
    eval->add_option("--folds", opt.folds)->check(CLI::IsMember({5, 10}));
    eval->add_option("--mtry", opt.mtry)->check(CLI::Range(5, 20));
    eval->add_option("--trees", opt.trees)->check(CLI::PositiveNumber);

    auto* pred = app.add_subcommand("predict", "frame completion probabilities for every play");
    add_common(pred);
    pred->add_option("--bins", opt.bins, "calibration bins")->check(CLI::Range(2, 1000));

    auto* ren = app.add_subcommand("render", "overlay CSV / SVG drawings for one play");
    add_common(ren);
    ren->add_option("--game", opt.game_id)->required();
    ren->add_option("--play", opt.play_id)->required();
    ren->add_option("--first", opt.first_frame, "first frame (default: window start)");
    ren->add_option("--last", opt.last_frame, "last frame (default: window end)");
    ren->add_option("--format", opt.format)->check(CLI::IsMember({"csv", "json", "svg"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_synthetic(opt);
        if (ing->parsed()) return cmd_ingest(opt);
        if (tp->parsed()) return cmd_target_probs(opt);
        if (feat->parsed()) return cmd_features(opt);
        if (train->parsed()) return cmd_train(opt);
        if (eval->parsed()) return cmd_evaluate(opt);
        if (pred->parsed()) return cmd_predict(opt);
        if (ren->parsed()) return cmd_render(opt);
    } catch (const PipelineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
