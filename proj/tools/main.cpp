// occtrack: command-line front end for the occlusion-aware tracker.
//
// Subcommands:
//   simulate          render a scenario to PGM frames plus ground-truth CSV
//   track             run the tracker over a directory of PGM frames
//   train-predictor   train the adversarial trajectory predictor
//   eval              score a results CSV against a ground-truth CSV
//   sweep             rerun scenarios across a grid of occlusion thresholds
//   study-obs-length  compare prediction error across observation lengths
//
// Configuration comes from one JSON file (--config) with a few flag
// overrides on top. Every subcommand that produces files also writes a
// manifest JSON beside them recording the tool version, the full effective
// configuration, the seeds, and the input/output paths, so any run can be
// reproduced from its outputs alone.
//
// Exit codes: 0 success, 2 configuration/spec/data validation error,
// 3 target lost beyond the prediction horizon, 1 any other failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "occtrack/config.hpp"
#include "occtrack/errors.hpp"
#include "occtrack/gan.hpp"
#include "occtrack/harness.hpp"
#include "occtrack/image.hpp"
#include "occtrack/metrics.hpp"
#include "occtrack/pipeline.hpp"
#include "occtrack/sim.hpp"
#include "occtrack/trajectory.hpp"
#include "occtrack/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace occtrack;

namespace {

// ---------------------------------------------------------------------------
// Shared plumbing.

struct CommonOptions {
    std::string config_path;
    std::optional<uint64_t> seed;            // pipeline noise seed
    std::optional<double> epsilon_threshold;
    std::optional<std::string> criterion;
    std::optional<uint64_t> gan_seed;
    std::optional<int> steps;
    std::optional<int> batch_size;
};

ToolConfig effective_config(const CommonOptions& opt) {
    ToolConfig cfg;
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
    if (opt.seed) cfg.pipeline.seed = *opt.seed;
    if (opt.epsilon_threshold) cfg.pipeline.occlusion.epsilon_threshold = *opt.epsilon_threshold;
    if (opt.criterion) {
        if (*opt.criterion == "composite")
            cfg.pipeline.criterion = OcclusionCriterion::kComposite;
        else if (*opt.criterion == "distance")
            cfg.pipeline.criterion = OcclusionCriterion::kDistance;
        else if (*opt.criterion == "score")
            cfg.pipeline.criterion = OcclusionCriterion::kScore;
        else
            throw ValidationError("criterion must be composite, distance, or score");
    }
    if (opt.gan_seed) cfg.gan.seed = *opt.gan_seed;
    if (opt.steps) cfg.gan.steps = *opt.steps;
    if (opt.batch_size) cfg.gan.batch_size = *opt.batch_size;
    return cfg;
}

void add_tracking_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "JSON configuration file");
    cmd->add_option("--seed", opt.seed, "Override the pipeline noise seed");
    cmd->add_option("--epsilon-threshold", opt.epsilon_threshold,
                    "Override the occlusion-index threshold");
    cmd->add_option("--criterion", opt.criterion,
                    "Occlusion rule: composite, distance, or score");
}

void add_training_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "JSON configuration file");
    cmd->add_option("--gan-seed", opt.gan_seed, "Override the training seed");
    cmd->add_option("--steps", opt.steps, "Override the training step count");
    cmd->add_option("--batch-size", opt.batch_size, "Override the batch size");
}

void write_manifest(const std::string& path, const std::string& subcommand,
                    const ToolConfig& cfg, const json& seeds, const json& inputs,
                    const json& outputs) {
    json m;
    m["tool"] = "occtrack";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    m["config"] = json::parse(config_to_json(cfg));
    m["seeds"] = seeds;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << m.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed to write manifest: " + path);
}

std::string frame_name(size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%04zu.pgm", index);
    return buf;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        double start = 0.0, stop = 0.0, step = 0.0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
            throw ValidationError("range must look like start:stop:step");
        if (!(step > 0.0)) throw ValidationError("range step must be positive");
        for (double v = start; v <= stop + 1e-9; v += step) values.push_back(v);
    } else {
        std::string item;
        std::istringstream in(text);
        while (std::getline(in, item, ',')) {
            if (item.empty()) continue;
            values.push_back(std::stod(item));
        }
    }
    if (values.empty()) throw ValidationError("the value list is empty");
    return values;
}

SweepParam parse_param(const std::string& name) {
    if (name == "epsilon_t" || name == "epsilon_threshold") return SweepParam::kEpsilonThreshold;
    if (name == "d_t" || name == "distance_threshold") return SweepParam::kDistanceThreshold;
    if (name == "s_t" || name == "score_threshold") return SweepParam::kScoreThreshold;
    if (name == "i" || name == "mix_weight") return SweepParam::kMixWeight;
    throw ValidationError("unknown sweep parameter: " + name +
                          " (expected epsilon_t, d_t, s_t, or i)");
}

std::vector<int> parse_lengths(const std::string& text) {
    std::vector<int> lengths;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        lengths.push_back(std::stoi(item));
    }
    if (lengths.empty()) throw ValidationError("the lengths list is empty");
    return lengths;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& spec_path, const std::string& out_dir) {
    const ScenarioSpec spec = load_scenario(spec_path);
    spec.validate();
    const Simulation sim = simulate(spec);

    fs::create_directories(out_dir);
    json frame_list = json::array();
    for (size_t i = 0; i < sim.frames.size(); ++i) {
        const std::string name = frame_name(i);
        save_pgm((fs::path(out_dir) / name).string(), sim.frames[i]);
        frame_list.push_back(name);
    }
    save_truth_csv((fs::path(out_dir) / "truth.csv").string(), sim.truth);
    save_scenario((fs::path(out_dir) / "scenario.json").string(), spec);

    write_manifest((fs::path(out_dir) / "manifest.json").string(), "simulate", ToolConfig{},
                   {{"scenario", spec.seed}}, {{"spec", spec_path}},
                   {{"frames", frame_list}, {"truth", "truth.csv"}, {"scenario", "scenario.json"}});
    std::printf("simulate: %zu frames, %zu truth rows -> %s\n", sim.frames.size(),
                sim.truth.size(), out_dir.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// track

std::vector<Frame> load_frame_dir(const std::string& dir) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.size() < 2)
        throw ValidationError("the sequence directory needs at least two .pgm frames");
    std::vector<Frame> frames;
    frames.reserve(paths.size());
    for (const fs::path& p : paths) frames.push_back(load_pgm(p.string()));
    return frames;
}

BoundingBox initial_box(const std::string& init_flag, const std::string& seq_dir) {
    if (!init_flag.empty()) {
        BoundingBox b;
        if (std::sscanf(init_flag.c_str(), "%lf,%lf,%lf,%lf", &b.cx, &b.cy, &b.w, &b.h) != 4)
            throw ValidationError("--init must look like cx,cy,w,h");
        return b;
    }
    const fs::path truth = fs::path(seq_dir) / "truth.csv";
    if (!fs::exists(truth))
        throw ValidationError("no --init box given and no truth.csv in the sequence directory");
    const std::vector<TruthRow> rows = load_truth_csv(truth.string());
    if (rows.empty()) throw ValidationError("truth.csv has no rows");
    return rows.front().box;
}

int cmd_track(const std::string& seq_dir, const std::string& predictor_path,
              const std::string& out_path, const std::string& init_flag,
              const CommonOptions& opt) {
    ToolConfig cfg = effective_config(opt);
    const GanModel model = load_gan_model(predictor_path);
    // The predictor's horizon and field scale are baked in at training time
    // and must match what the pipeline feeds it.
    cfg.pipeline.t_obs = model.t_obs;
    cfg.pipeline.n_pred = model.n_pred;
    cfg.pipeline.field_size = model.field_size;
    cfg.pipeline.validate();

    const std::vector<Frame> frames = load_frame_dir(seq_dir);
    const BoundingBox init = initial_box(init_flag, seq_dir);

    std::vector<TruthRow> truth;
    const fs::path truth_path = fs::path(seq_dir) / "truth.csv";
    if (fs::exists(truth_path)) truth = load_truth_csv(truth_path.string());

    const RunOutcome run = run_sequence(frames, init, model.generator, cfg.pipeline);

    {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
        write_results_csv(out, run.results, truth.empty() ? nullptr : &truth);
    }
    write_manifest(out_path + ".manifest.json", "track", cfg,
                   {{"pipeline", cfg.pipeline.seed}},
                   {{"sequence", seq_dir}, {"predictor", predictor_path}},
                   {{"results", out_path}, {"lost", run.lost}, {"lost_frame", run.lost_frame}});

    if (!truth.empty()) {
        const MetricsReport rep = evaluate(run.results, truth);
        std::printf("track: %zu frames, mean IoU %.3f, failures %d\n", run.results.size(),
                    rep.mean_iou, rep.failures);
    } else {
        std::printf("track: %zu frames\n", run.results.size());
    }
    if (run.lost) {
        std::fprintf(stderr, "track: target lost at frame %ld (results up to the loss written)\n",
                     run.lost_frame);
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// train-predictor

int cmd_train(const std::string& data_path, const std::string& out_path, int holdout_every,
              const CommonOptions& opt) {
    const ToolConfig cfg = effective_config(opt);
    const std::vector<Trajectory> trajs = load_trajectory_csv(data_path);
    const std::vector<TrajSplit> all = make_splits(trajs, cfg.gan.t_obs, cfg.gan.n_pred);
    if (all.empty())
        throw ValidationError("no training windows: trajectories shorter than t_obs + n_pred");

    std::vector<TrajSplit> train, held;
    for (size_t i = 0; i < all.size(); ++i) {
        if (holdout_every > 0 && i % holdout_every == static_cast<size_t>(holdout_every) - 1)
            held.push_back(all[i]);
        else
            train.push_back(all[i]);
    }

    const TrainedGan trained = train_gan(train, cfg.gan);
    save_gan_model(out_path, trained.model);

    json outputs = {{"predictor", out_path}, {"training_windows", train.size()}};
    if (!trained.log.d_loss.empty())
        outputs["final_d_loss"] = trained.log.d_loss.back();
    if (!trained.log.g_loss.empty())
        outputs["final_g_loss"] = trained.log.g_loss.back();
    if (!held.empty()) {
        const double held_ade = evaluate_ade(trained.model.generator, held,
                                             {cfg.gan.n_pred, cfg.gan.field_size}, 778);
        outputs["held_out_windows"] = held.size();
        outputs["held_out_ade"] = held_ade;
        std::printf("train-predictor: %zu windows trained, held-out ADE %.4f px\n", train.size(),
                    held_ade);
    } else {
        std::printf("train-predictor: %zu windows trained\n", train.size());
    }
    write_manifest(out_path + ".manifest.json", "train-predictor", cfg,
                   {{"gan", cfg.gan.seed}}, {{"data", data_path}}, outputs);
    return 0;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const std::string& results_path, const std::string& truth_path,
             const std::string& out_path) {
    const std::vector<FrameResult> results = load_results_csv(results_path);
    const std::vector<TruthRow> truth = load_truth_csv(truth_path);
    const MetricsReport rep = evaluate(results, truth);

    // mean_iou and failures are desk-scale stand-ins for tracking accuracy
    // (mean overlap) and robustness (failure count).
    std::printf("frames:              %d\n", rep.frames);
    std::printf("mean_iou (accuracy): %.6f\n", rep.mean_iou);
    std::printf("failures (robust.):  %d\n", rep.failures);
    std::printf("occlusion_precision: %.6f\n", rep.occlusion_precision);
    std::printf("occlusion_recall:    %.6f\n", rep.occlusion_recall);
    if (rep.predictor_ade) std::printf("predictor_ade:       %.6f\n", *rep.predictor_ade);

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
        write_metrics_csv_header(out);
        write_metrics_csv_row(out, rep);
        write_manifest(out_path + ".manifest.json", "eval", ToolConfig{}, json::object(),
                       {{"results", results_path}, {"truth", truth_path}},
                       {{"metrics", out_path}});
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const std::vector<std::string>& scenario_paths, const std::string& param_name,
              const std::string& values_text, const std::string& predictor_path,
              const std::string& out_path, const CommonOptions& opt) {
    ToolConfig cfg = effective_config(opt);
    const GanModel model = load_gan_model(predictor_path);
    cfg.pipeline.t_obs = model.t_obs;
    cfg.pipeline.n_pred = model.n_pred;
    cfg.pipeline.field_size = model.field_size;
    cfg.pipeline.validate();

    const SweepParam param = parse_param(param_name);
    const std::vector<double> values = parse_values(values_text);

    std::vector<ScenarioSpec> scenarios;
    json seeds = json::object();
    seeds["pipeline"] = cfg.pipeline.seed;
    json scenario_seeds = json::object();
    for (const std::string& path : scenario_paths) {
        scenarios.push_back(load_scenario(path));
        scenario_seeds[scenarios.back().name] = scenarios.back().seed;
    }
    seeds["scenarios"] = scenario_seeds;

    const std::vector<SweepRow> rows = sweep(scenarios, param, values, cfg.pipeline,
                                             model.generator);
    {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
        write_sweep_csv(out, param, rows);
    }
    write_manifest(out_path + ".manifest.json", "sweep", cfg, seeds,
                   {{"scenarios", scenario_paths}, {"predictor", predictor_path}},
                   {{"table", out_path}, {"rows", rows.size()}});
    std::printf("sweep: %zu values x %zu scenarios -> %s\n", values.size(), scenarios.size(),
                out_path.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// study-obs-length

int cmd_study(const std::string& data_path, const std::string& lengths_text,
              const std::string& out_path, const CommonOptions& opt) {
    const ToolConfig cfg = effective_config(opt);
    const std::vector<Trajectory> trajs = load_trajectory_csv(data_path);
    const std::vector<int> lengths = parse_lengths(lengths_text);

    const std::vector<ObsLengthRow> rows = observation_length_study(trajs, lengths, cfg.gan);
    {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
        write_study_csv(out, rows);
    }
    write_manifest(out_path + ".manifest.json", "study-obs-length", cfg,
                   {{"gan", cfg.gan.seed}}, {{"data", data_path}},
                   {{"table", out_path}, {"rows", rows.size()}});
    for (const ObsLengthRow& r : rows)
        std::printf("t_obs=%d  samples=%d  mean ADE %.4f px\n", r.t_obs, r.sample_count,
                    r.mean_ade);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"occlusion-aware single-target tracker on synthetic scenes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // simulate
    std::string spec_path, sim_out_dir;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Render a scenario to frames and truth");
    sim_cmd->add_option("--spec", spec_path, "Scenario JSON file")->required();
    sim_cmd->add_option("--out", sim_out_dir, "Output directory")->required();

    // track
    CommonOptions track_opt;
    std::string seq_dir, track_predictor, track_out = "results.csv", init_flag;
    CLI::App* track_cmd = app.add_subcommand("track", "Run the tracker over a frame directory");
    track_cmd->add_option("--seq", seq_dir, "Directory of .pgm frames")->required();
    track_cmd->add_option("--predictor", track_predictor, "Trained predictor file")->required();
    track_cmd->add_option("--out", track_out, "Results CSV path");
    track_cmd->add_option("--init", init_flag,
                          "Initial box cx,cy,w,h (default: first truth.csv row)");
    add_tracking_flags(track_cmd, track_opt);

    // train-predictor
    CommonOptions train_opt;
    std::string train_data, train_out = "predictor.bin";
    int holdout_every = 0;
    CLI::App* train_cmd =
        app.add_subcommand("train-predictor", "Train the trajectory predictor");
    train_cmd->add_option("--data", train_data, "Trajectory CSV (frame_id,x,y,track_id)")
        ->required();
    train_cmd->add_option("--out", train_out, "Predictor output file");
    train_cmd->add_option("--holdout-every", holdout_every,
                          "Hold out every Nth window and report its ADE (0 = train on all)");
    add_training_flags(train_cmd, train_opt);

    // eval
    std::string eval_results, eval_truth, eval_out;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score results against ground truth");
    eval_cmd->add_option("--results", eval_results, "Results CSV")->required();
    eval_cmd->add_option("--truth", eval_truth, "Ground-truth CSV")->required();
    eval_cmd->add_option("--out", eval_out, "Optional metrics CSV path");

    // sweep
    CommonOptions sweep_opt;
    std::vector<std::string> sweep_scenarios;
    std::string sweep_param, sweep_values, sweep_predictor, sweep_out = "sweep.csv";
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Rerun scenarios across a parameter grid");
    sweep_cmd->add_option("--scenario", sweep_scenarios, "Scenario JSON file (repeatable)")
        ->required();
    sweep_cmd->add_option("--param", sweep_param, "epsilon_t, d_t, s_t, or i")->required();
    sweep_cmd->add_option("--values", sweep_values, "start:stop:step or v1,v2,...")->required();
    sweep_cmd->add_option("--predictor", sweep_predictor, "Trained predictor file")->required();
    sweep_cmd->add_option("--out", sweep_out, "Sweep table CSV path");
    add_tracking_flags(sweep_cmd, sweep_opt);

    // study-obs-length
    CommonOptions study_opt;
    std::string study_data, study_lengths = "2,4,6", study_out = "study.csv";
    CLI::App* study_cmd = app.add_subcommand(
        "study-obs-length", "Compare prediction error across observation lengths");
    study_cmd->add_option("--data", study_data, "Trajectory CSV (frame_id,x,y,track_id)")
        ->required();
    study_cmd->add_option("--lengths", study_lengths, "Comma list of observation lengths");
    study_cmd->add_option("--out", study_out, "Study table CSV path");
    add_training_flags(study_cmd, study_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed()) return cmd_simulate(spec_path, sim_out_dir);
        if (track_cmd->parsed())
            return cmd_track(seq_dir, track_predictor, track_out, init_flag, track_opt);
        if (train_cmd->parsed())
            return cmd_train(train_data, train_out, holdout_every, train_opt);
        if (eval_cmd->parsed()) return cmd_eval(eval_results, eval_truth, eval_out);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_scenarios, sweep_param, sweep_values, sweep_predictor,
                             sweep_out, sweep_opt);
        if (study_cmd->parsed())
            return cmd_study(study_data, study_lengths, study_out, study_opt);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const TargetLost& e) {
        std::fprintf(stderr, "error: %s (frame %ld)\n", e.what(), e.frame());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
