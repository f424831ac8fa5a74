// Release gate for the tracker. Nine end-to-end checks, each with an explicit
// tolerance and a runtime budget, covering: peak extraction against a
// brute-force oracle, the occlusion-index identity, finite-difference
// validation of every training gradient, adversarial predictor training,
// the observation-length ordering, anti-occlusion tracking with and without
// the occlusion judge, detector precision/recall, threshold-sweep
// reproducibility, and the tracker state-machine invariants.
//
// Each check prints exactly one PASS/FAIL line; the process exits nonzero
// when any check fails or exceeds its budget, so CI can gate on it.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "occtrack/appearance.hpp"
#include "occtrack/errors.hpp"
#include "occtrack/gan.hpp"
#include "occtrack/harness.hpp"
#include "occtrack/heatmap.hpp"
#include "occtrack/losses.hpp"
#include "occtrack/metrics.hpp"
#include "occtrack/occlusion.hpp"
#include "occtrack/pipeline.hpp"
#include "occtrack/seqnet.hpp"
#include "occtrack/sim.hpp"
#include "occtrack/trajectory.hpp"
#include "testutil.hpp"

using namespace occtrack;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string format(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    return buf;
}

// State produced by earlier checks and reused by later ones. The predictor
// trained in check 4 drives every tracking run afterwards, so the whole gate
// exercises one consistent model.
struct Shared {
    std::optional<GanModel> model;
    // Post-cover recovery and detector tallies from check 6, reused by 7.
    struct SuiteEval {
        int post_frames = 0;
        int post_good = 0;
        EvalTally tally;
        int lost_runs = 0;
    };
    std::optional<SuiteEval> full_suite;
};

PipelineConfig suite_config() {
    PipelineConfig cfg;
    cfg.field_size = 100.0;
    cfg.seed = 7;
    return cfg;
}

std::vector<double> epsilon_grid() {
    std::vector<double> grid;
    for (int k = 0; k < 9; ++k) grid.push_back(0.55 + 0.05 * k);
    return grid;
}

// ---------------------------------------------------------------------------
// Check 1: peak extraction equals the brute-force oracle on random maps.

Outcome check_peak_oracle() {
    std::mt19937_64 rng(20260825);
    std::uniform_int_distribution<int> size_dist(8, 16);
    std::uniform_int_distribution<int> k_dist(2, 6);
    std::uniform_int_distribution<int> level_dist(1, 3);
    std::uniform_int_distribution<int> quant_dist(0, 10);

    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = size_dist(rng);
        const int k = k_dist(rng);
        const int level = level_dist(rng);
        ResponseMap map = testutil::random_map(n, level, rng);
        if (trial % 2 == 1) {
            // Quantize half the maps to one decimal so tie-breaking runs hot.
            std::vector<double> v = map.values();
            for (double& x : v) x = (quant_dist(rng) - 5) / 5.0;
            map = ResponseMap(n, level, std::move(v));
        }

        const PeakSet got = extract_peaks(map, k);
        const std::vector<testutil::RefPeak> want = testutil::reference_peaks(map, k);
        if (got.peaks.size() != want.size())
            return {false, format("map %d: %zu peaks, oracle %zu", trial, got.peaks.size(),
                                  want.size())};
        for (size_t i = 0; i < want.size(); ++i) {
            if (got.peaks[i].row != want[i].row || got.peaks[i].col != want[i].col ||
                got.peaks[i].score != want[i].score)
                return {false, format("map %d: peak %zu differs from oracle", trial, i)};
        }
        const std::vector<double> got_d = compute_distances(got);
        const std::vector<double> want_d = testutil::reference_distances(want);
        if (got_d != want_d) return {false, format("map %d: peak distances differ", trial)};
        ++checked;
    }
    return {true, format("%d/1000 random maps identical (peaks and distances)", checked)};
}

// ---------------------------------------------------------------------------
// Check 2: occlusion index hits 1 exactly at the normalizer point and is
// strictly monotone in both arguments.

Outcome check_index_identity() {
    const OcclusionConfig cfg;  // mix 0.8, normalizers 0.95 and 5.5
    const double at_norms = composite_index(0.95, 5.5, cfg);
    if (std::abs(at_norms - 1.0) > 1e-12)
        return {false, format("index(0.95, 5.5) = %.17g, expected 1 within 1e-12", at_norms)};

    for (int i = 0; i + 1 < 100; ++i) {
        for (int j = 0; j + 1 < 100; ++j) {
            const double s0 = i / 99.0;
            const double s1 = (i + 1) / 99.0;
            const double d0 = 11.0 * j / 99.0;
            const double d1 = 11.0 * (j + 1) / 99.0;
            if (!(composite_index(s1, d0, cfg) > composite_index(s0, d0, cfg)))
                return {false, format("not increasing in score at s=%.3f d=%.3f", s0, d0)};
            if (!(composite_index(s0, d1, cfg) > composite_index(s0, d0, cfg)))
                return {false, format("not increasing in distance at s=%.3f d=%.3f", s0, d0)};
        }
    }
    return {true, "identity within 1e-12; strictly increasing over the 100x100 grid"};
}

// ---------------------------------------------------------------------------
// Check 3: every analytic gradient matches central finite differences.

constexpr double kGradRel = 1e-5;
constexpr double kGradAbsFloor = 1e-9;

bool check_cls_gradients(std::mt19937_64& rng, std::string* why) {
    std::uniform_int_distribution<int> size_dist(3, 10);
    std::uniform_real_distribution<double> prob(0.02, 0.98);
    std::uniform_real_distribution<double> weight(0.3, 2.0);
    std::uniform_int_distribution<int> coin(0, 1);

    for (int trial = 0; trial < 50; ++trial) {
        ClsBatch batch;
        const int n = size_dist(rng);
        for (int i = 0; i < n; ++i) {
            batch.predictions.push_back(prob(rng));
            batch.labels.push_back(coin(rng));
        }
        LossWeights w;
        w.lambda_pos = weight(rng);
        w.lambda_neg = weight(rng);
        const int gamma = coin(rng);

        const struct {
            const char* name;
            std::function<double()> loss;
            std::vector<double> grad;
        } cases[] = {
            {"cls_loss_pos", [&] { return cls_loss_pos(batch); }, cls_loss_pos_grad(batch)},
            {"cls_loss_neg", [&] { return cls_loss_neg(batch); }, cls_loss_neg_grad(batch)},
            {"cls_loss", [&] { return cls_loss(batch, w); }, cls_loss_grad(batch, w)},
            {"occlusion_cls_loss", [&] { return occlusion_cls_loss(batch, w, gamma); },
             occlusion_cls_loss_grad(batch, w, gamma)},
        };
        for (const auto& c : cases) {
            const std::vector<double> fd =
                testutil::fd_gradient(c.loss, batch.predictions, 1e-6);
            double worst = 0.0;
            if (!testutil::grads_match(c.grad, fd, kGradRel, kGradAbsFloor, &worst)) {
                *why = format("%s trial %d: worst relative error %.3g", c.name, trial, worst);
                return false;
            }
        }
    }
    return true;
}

bool check_reg_gradient(std::mt19937_64& rng, std::string* why) {
    std::uniform_int_distribution<int> size_dist(1, 6);
    std::uniform_real_distribution<double> coord(5.0, 60.0);
    std::uniform_real_distribution<double> gap(0.05, 3.0);
    std::uniform_int_distribution<int> coin(0, 1);

    for (int trial = 0; trial < 50; ++trial) {
        const int n = size_dist(rng);
        // Keep every coordinate pair separated so the finite difference never
        // straddles the L1 kink at equality.
        BoxBatch batch;
        std::vector<double> flat;
        for (int i = 0; i < n; ++i) {
            BoundingBox p{coord(rng), coord(rng), coord(rng), coord(rng)};
            BoundingBox t = p;
            for (double* f : {&t.cx, &t.cy, &t.w, &t.h})
                *f += (coin(rng) ? 1.0 : -1.0) * gap(rng);
            batch.predicted.push_back(p);
            batch.truth.push_back(t);
            flat.insert(flat.end(), {p.cx, p.cy, p.w, p.h});
        }
        const auto loss = [&] {
            for (int i = 0; i < n; ++i) {
                batch.predicted[i] = {flat[4 * i], flat[4 * i + 1], flat[4 * i + 2],
                                      flat[4 * i + 3]};
            }
            return reg_loss(batch);
        };
        const std::vector<double> fd = testutil::fd_gradient(loss, flat, 1e-6);
        const std::vector<BoundingBox> grad_boxes = reg_loss_grad(batch);
        std::vector<double> grad;
        for (const BoundingBox& b : grad_boxes) grad.insert(grad.end(), {b.cx, b.cy, b.w, b.h});
        double worst = 0.0;
        if (!testutil::grads_match(grad, fd, kGradRel, kGradAbsFloor, &worst)) {
            *why = format("reg_loss trial %d: worst relative error %.3g", trial, worst);
            return false;
        }
    }
    return true;
}

bool check_gan_prob_gradients(std::mt19937_64& rng, std::string* why) {
    std::uniform_int_distribution<int> size_dist(1, 6);
    std::uniform_real_distribution<double> prob(0.05, 0.95);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> real(size_dist(rng)), fake(size_dist(rng));
        for (double& p : real) p = prob(rng);
        for (double& p : fake) p = prob(rng);
        const GanLossGrad g = gan_loss_grad(real, fake);
        const std::vector<double> fd_real =
            testutil::fd_gradient([&] { return gan_loss(real, fake).d_loss; }, real, 1e-6);
        const std::vector<double> fd_fake_d =
            testutil::fd_gradient([&] { return gan_loss(real, fake).d_loss; }, fake, 1e-6);
        const std::vector<double> fd_fake_g =
            testutil::fd_gradient([&] { return gan_loss(real, fake).g_loss; }, fake, 1e-6);
        double worst = 0.0;
        if (!testutil::grads_match(g.d_loss_wrt_real, fd_real, kGradRel, kGradAbsFloor, &worst) ||
            !testutil::grads_match(g.d_loss_wrt_fake, fd_fake_d, kGradRel, kGradAbsFloor,
                                   &worst) ||
            !testutil::grads_match(g.g_loss_wrt_fake, fd_fake_g, kGradRel, kGradAbsFloor,
                                   &worst)) {
            *why = format("gan_loss trial %d: worst relative error %.3g", trial, worst);
            return false;
        }
    }
    return true;
}

Trajectory random_walk(std::mt19937_64& rng, int length, double span) {
    std::uniform_real_distribution<double> step(-span, span);
    Trajectory t;
    double x = 50.0 + step(rng);
    double y = 50.0 + step(rng);
    for (int i = 0; i < length; ++i) {
        t.push_back({x, y}, i);
        x += step(rng);
        y += step(rng);
    }
    return t;
}

std::vector<double> gaussian_noise(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> z(dim);
    for (double& v : z) v = gauss(rng);
    return z;
}

bool check_net_gradients(std::mt19937_64& rng, std::string* why) {
    const GenConfig gcfg{2, 100.0};
    for (int trial = 0; trial < 50; ++trial) {
        // Discriminator loss through the recurrent net.
        SeqNetParams d = SeqNetParams::random_init(NetRole::kDiscriminator, 5, 0, rng);
        const std::vector<Trajectory> real{random_walk(rng, 6, 3.0), random_walk(rng, 5, 3.0)};
        const std::vector<Trajectory> fake{random_walk(rng, 6, 3.0), random_walk(rng, 4, 3.0)};
        std::vector<double> d_grad;
        discriminator_batch_grad(d, real, fake, 100.0, d_grad);
        const std::vector<double> d_fd = testutil::fd_gradient(
            [&] {
                std::vector<double> scratch;
                return discriminator_batch_grad(d, real, fake, 100.0, scratch);
            },
            d.flat, 1e-5);
        double worst = 0.0;
        if (!testutil::grads_match(d_grad, d_fd, kGradRel, kGradAbsFloor, &worst)) {
            *why = format("discriminator grad trial %d: worst relative error %.3g", trial, worst);
            return false;
        }

        // Generator loss backpropagated through the frozen discriminator.
        SeqNetParams g = SeqNetParams::random_init(NetRole::kGenerator, 5, 3, rng);
        const std::vector<Trajectory> observed{random_walk(rng, 4, 2.0),
                                               random_walk(rng, 4, 2.0)};
        const std::vector<std::vector<double>> noises{gaussian_noise(rng, 3),
                                                      gaussian_noise(rng, 3)};
        std::vector<double> g_grad;
        generator_batch_grad(g, d, observed, noises, gcfg, g_grad);
        const std::vector<double> g_fd = testutil::fd_gradient(
            [&] {
                std::vector<double> scratch;
                return generator_batch_grad(g, d, observed, noises, gcfg, scratch);
            },
            g.flat, 1e-5);
        if (!testutil::grads_match(g_grad, g_fd, kGradRel, kGradAbsFloor, &worst)) {
            *why = format("generator grad trial %d: worst relative error %.3g", trial, worst);
            return false;
        }
    }
    return true;
}

Outcome check_gradients() {
    std::mt19937_64 rng(424242);
    std::string why;
    if (!check_cls_gradients(rng, &why)) return {false, why};
    if (!check_reg_gradient(rng, &why)) return {false, why};
    if (!check_gan_prob_gradients(rng, &why)) return {false, why};
    if (!check_net_gradients(rng, &why)) return {false, why};
    return {true, "classification, regression, adversarial, and both net gradients: "
                  "50 instances each within 1e-5 of central differences"};
}

// ---------------------------------------------------------------------------
// Check 4: the reference training run reaches sub-pixel held-out error, and
// the trained generator stays exactly translation-equivariant.

Outcome check_predictor_training(Shared& shared) {
    GanTrainConfig cfg;  // reference configuration
    const std::vector<Trajectory> trajs = make_linear_trajectories(
        200, cfg.t_obs + cfg.n_pred, cfg.field_size, 1.0, 0.0, 11);
    const std::vector<TrajSplit> all = make_splits(trajs, cfg.t_obs, cfg.n_pred);
    std::vector<TrajSplit> train, held;
    for (size_t i = 0; i < all.size(); ++i) {
        (i % 5 == 4 ? held : train).push_back(all[i]);
    }

    const TrainedGan out = train_gan(train, cfg);
    const double held_ade =
        evaluate_ade(out.model.generator, held, {cfg.n_pred, cfg.field_size}, 778);
    if (!(held_ade < 1.0))
        return {false, format("held-out ADE %.3f px, need < 1.0", held_ade)};

    // Exact translation equivariance: observed points on a 1/8-pixel grid
    // with every coordinate (shifted and unshifted) inside the binade
    // [64, 128), so delta subtraction and re-integration round identically.
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> xi(66 * 8, 88 * 8);
    std::uniform_int_distribution<int> yi(82 * 8, 110 * 8);
    std::uniform_int_distribution<int> di(-12, 12);
    int cases = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Trajectory obs;
        double x = xi(rng) / 8.0;
        double y = yi(rng) / 8.0;
        for (int i = 0; i < cfg.t_obs; ++i) {
            obs.push_back({x, y}, i);
            x += di(rng) / 8.0;
            y += di(rng) / 8.0;
        }
        Trajectory shifted = obs;
        const double tx = 32.0;
        const double ty = -16.0;
        for (Point2& p : shifted.points) {
            p.x += tx;
            p.y += ty;
        }
        const std::vector<double> z = gaussian_noise(rng, out.model.generator.noise_dim);
        const Trajectory base =
            generator_forward(out.model.generator, obs, z, {cfg.n_pred, cfg.field_size});
        const Trajectory moved =
            generator_forward(out.model.generator, shifted, z, {cfg.n_pred, cfg.field_size});
        for (size_t i = 0; i < base.size(); ++i) {
            if (moved.points[i].x != base.points[i].x + tx ||
                moved.points[i].y != base.points[i].y + ty)
                return {false, format("equivariance broken on trial %d point %zu", trial, i)};
        }
        ++cases;
    }

    shared.model = out.model;
    return {true, format("held-out ADE %.3f px (< 1.0); translation equivariance bit-exact "
                         "on %d trajectories",
                         held_ade, cases)};
}

// ---------------------------------------------------------------------------
// Check 5: four observed points predict mixed motion at least as well as two.

Outcome check_observation_length() {
    const std::vector<Trajectory> trajs =
        make_mixed_trajectories(60, 8, 100.0, 1.0, 0.25, 21);
    const GanTrainConfig base;  // reference configuration, seed 1
    const std::vector<ObsLengthRow> rows = observation_length_study(trajs, {2, 4}, base);
    if (rows.size() != 2) return {false, format("expected 2 rows, got %zu", rows.size())};
    const ObsLengthRow* two = nullptr;
    const ObsLengthRow* four = nullptr;
    for (const ObsLengthRow& r : rows) {
        if (r.t_obs == 2) two = &r;
        if (r.t_obs == 4) four = &r;
    }
    if (!two || !four) return {false, "study rows missing a requested length"};
    if (!(four->mean_ade <= two->mean_ade))
        return {false, format("ADE(t_obs=4) %.3f > ADE(t_obs=2) %.3f", four->mean_ade,
                              two->mean_ade)};
    return {true, format("ADE(t_obs=4) %.3f <= ADE(t_obs=2) %.3f over %d trajectories",
                         four->mean_ade, two->mean_ade, 60)};
}

// ---------------------------------------------------------------------------
// Checks 6 and 7: the crossing suite, with and without the occlusion judge.

Shared::SuiteEval eval_suite(const SeqNetParams& predictor, const PipelineConfig& cfg) {
    Shared::SuiteEval out;
    for (int k = 0; k < 10; ++k) {
        const ScenarioSpec spec = fixtures::crossing_scenario(k);
        spec.validate();
        const Simulation sim = simulate(spec);
        const RunOutcome run = run_sequence(sim.frames, sim.truth.front().box, predictor, cfg);
        if (run.lost) out.lost_runs++;

        long last_occluded = -1;
        for (const TruthRow& r : sim.truth)
            if (r.occluded) last_occluded = r.frame;
        for (const FrameResult& fr : run.results) {
            const TruthRow& tr = sim.truth[static_cast<size_t>(fr.frame)];
            if (fr.frame > last_occluded) {
                out.post_frames++;
                if (iou(fr.box, tr.box) > 0.5) out.post_good++;
            }
        }
        out.tally.merge(evaluate_tally(run.results, sim.truth));
    }
    return out;
}

Outcome check_anti_occlusion(Shared& shared) {
    if (!shared.model) return {false, "predictor unavailable (training check failed)"};
    const PipelineConfig cfg = suite_config();
    PipelineConfig ablated = cfg;
    ablated.occlusion.epsilon_threshold = 0.0;  // judge can never fire

    const Shared::SuiteEval full = eval_suite(shared.model->generator, cfg);
    const Shared::SuiteEval abl = eval_suite(shared.model->generator, ablated);
    shared.full_suite = full;

    const double full_pct = 100.0 * full.post_good / std::max(full.post_frames, 1);
    const double abl_pct = 100.0 * abl.post_good / std::max(abl.post_frames, 1);
    const bool pass = full_pct >= 80.0 && abl_pct < 40.0 && full.post_frames > 0;
    return {pass, format("post-cover IoU>0.5: full %d/%d (%.1f%%, need >= 80%%), "
                         "judge-off %d/%d (%.1f%%, need < 40%%)",
                         full.post_good, full.post_frames, full_pct, abl.post_good,
                         abl.post_frames, abl_pct)};
}

Outcome check_detector_quality(const Shared& shared) {
    if (!shared.full_suite) return {false, "suite results unavailable (check 6 failed)"};
    const MetricsReport rep = shared.full_suite->tally.report();
    const bool pass = rep.occlusion_precision >= 0.8 && rep.occlusion_recall >= 0.8;
    return {pass, format("precision %.3f, recall %.3f at default thresholds (need >= 0.8 each)",
                         rep.occlusion_precision, rep.occlusion_recall)};
}

// ---------------------------------------------------------------------------
// Check 8: the threshold sweep emits one row per grid value and reruns
// bit-identically.

Outcome check_sweep_reproducibility(const Shared& shared) {
    if (!shared.model) return {false, "predictor unavailable (training check failed)"};
    std::vector<ScenarioSpec> suite;
    for (int k = 0; k < 10; ++k) suite.push_back(fixtures::crossing_scenario(k));
    // Two partially-visible covers so neighboring thresholds disagree
    // somewhere and the sweep rows are not all equal.
    suite.push_back(fixtures::graze_scenario(10, 10.0));
    suite.push_back(fixtures::graze_scenario(11, 8.0));

    PipelineConfig base = suite_config();
    base.occlusion.mix_weight = 0.5;
    const std::vector<double> grid = epsilon_grid();

    const std::vector<SweepRow> first =
        sweep(suite, SweepParam::kEpsilonThreshold, grid, base, shared.model->generator);
    const std::vector<SweepRow> second =
        sweep(suite, SweepParam::kEpsilonThreshold, grid, base, shared.model->generator);

    std::ostringstream csv1, csv2;
    write_sweep_csv(csv1, SweepParam::kEpsilonThreshold, first);
    write_sweep_csv(csv2, SweepParam::kEpsilonThreshold, second);

    if (first.size() != 9)
        return {false, format("expected 9 rows, got %zu", first.size())};
    if (csv1.str() != csv2.str()) return {false, "rerun CSV differs byte for byte"};

    int distinct = 1;
    for (size_t i = 1; i < first.size(); ++i) {
        const MetricsReport &a = first[i - 1].report, &b = first[i].report;
        if (a.mean_iou != b.mean_iou || a.failures != b.failures ||
            a.occlusion_precision != b.occlusion_precision ||
            a.occlusion_recall != b.occlusion_recall)
            ++distinct;
    }
    return {true, format("9 rows over thresholds 0.55..0.95, bit-identical rerun, "
                         "%d distinct metric rows",
                         distinct)};
}

// ---------------------------------------------------------------------------
// Check 9: state-machine invariants on every fixture, plus the bit-exact
// reduction to a plain relocate loop when the judge is disabled.

std::vector<ScenarioSpec> all_fixtures() {
    std::vector<ScenarioSpec> specs;
    for (int k = 0; k < 10; ++k) specs.push_back(fixtures::crossing_scenario(k));
    specs.push_back(fixtures::graze_scenario(10, 10.0));
    specs.push_back(fixtures::graze_scenario(11, 8.0));
    specs.push_back(fixtures::clean_scenario());
    return specs;
}

Outcome check_state_machine(const Shared& shared) {
    if (!shared.model) return {false, "predictor unavailable (training check failed)"};
    const PipelineConfig cfg = suite_config();
    const SeqNetParams& predictor = shared.model->generator;

    int steps_checked = 0;
    int predicting_entries = 0;
    for (const ScenarioSpec& spec : all_fixtures()) {
        const Simulation sim = simulate(spec);
        const BoundingBox init = sim.truth.front().box;

        // Stepped run with the judge on: inspect the state before and after
        // every transition.
        const Template templ = crop_template(sim.frames[0], init);
        TrackState state = init_track_state(init, 0, cfg);
        for (size_t f = 1; f < sim.frames.size(); ++f) {
            const TrackMode pre_mode = state.mode;
            const size_t pre_history = state.history.size();
            FrameResult r;
            try {
                r = track_step(state, sim.frames[f], static_cast<long>(f), templ, predictor,
                               cfg);
            } catch (const TargetLost&) {
                break;
            }
            ++steps_checked;
            if (r.mode != state.mode)
                return {false, format("%s frame %zu: result mode disagrees with state",
                                      spec.name.c_str(), f)};
            const int changes = (r.mode != pre_mode) ? 1 : 0;
            if (changes > 1)
                return {false, format("%s frame %zu: more than one mode change in a step",
                                      spec.name.c_str(), f)};
            if (r.mode == TrackMode::kPredicting && pre_mode == TrackMode::kTracking) {
                ++predicting_entries;
                if (pre_history < static_cast<size_t>(cfg.t_obs))
                    return {false,
                            format("%s frame %zu: entered prediction with %zu history points, "
                                   "t_obs=%d",
                                   spec.name.c_str(), f, pre_history, cfg.t_obs)};
            }
            if (state.mode == TrackMode::kTracking && state.frames_predicted != 0)
                return {false, format("%s frame %zu: tracking mode with a nonzero predicted-"
                                      "frame counter",
                                      spec.name.c_str(), f)};
        }

        // Judge disabled: the pipeline must reduce, bit for bit, to cropping
        // a template once and running search-and-relocate every frame.
        PipelineConfig off = cfg;
        off.occlusion.epsilon_threshold = 0.0;
        const RunOutcome out = run_sequence(sim.frames, init, predictor, off);
        if (out.lost)
            return {false, format("%s: judge-off run reported a lost target", spec.name.c_str())};
        if (out.results.size() != sim.frames.size() - 1)
            return {false, format("%s: judge-off run truncated", spec.name.c_str())};
        BoundingBox box = init;
        for (size_t f = 1; f < sim.frames.size(); ++f) {
            try {
                box = locate(response_pyramid(sim.frames[f], templ, box, cfg.appearance), box);
            } catch (const TrackingFailure&) {
                // The pipeline holds the box on a blind frame; mirror that.
            }
            const FrameResult& r = out.results[f - 1];
            if (r.mode != TrackMode::kTracking)
                return {false, format("%s frame %zu: judge-off run left tracking mode",
                                      spec.name.c_str(), f)};
            if (r.box.cx != box.cx || r.box.cy != box.cy || r.box.w != box.w ||
                r.box.h != box.h)
                return {false, format("%s frame %zu: judge-off box differs from the plain "
                                      "relocate loop",
                                      spec.name.c_str(), f)};
        }
    }
    return {true, format("%d steps over 13 fixtures, %d prediction entries all gated by "
                         "t_obs history; judge-off runs equal the relocate loop bit-exactly",
                         steps_checked, predicting_entries)};
}

}  // namespace

int main() {
    Shared shared;

    struct Check {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Check> checks = {
        {"peak extraction matches the brute-force oracle", 10.0, check_peak_oracle},
        {"occlusion-index identity and monotonicity", 1.0, check_index_identity},
        {"analytic gradients match finite differences", 30.0, check_gradients},
        {"predictor training reaches sub-pixel error, equivariance exact", 300.0,
         [&] { return check_predictor_training(shared); }},
        {"four observed points predict no worse than two", 900.0, check_observation_length},
        {"post-cover recovery with the judge on, collapse with it off", 300.0,
         [&] { return check_anti_occlusion(shared); }},
        {"occlusion detector precision and recall", 300.0,
         [&] { return check_detector_quality(shared); }},
        {"threshold sweep: 9 rows, bit-identical rerun", 600.0,
         [&] { return check_sweep_reproducibility(shared); }},
        {"state-machine invariants and judge-off reduction", 120.0,
         [&] { return check_state_machine(shared); }},
    };

    int passed = 0;
    for (size_t i = 0; i < checks.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = checks[i].run();
        } catch (const std::exception& e) {
            outcome = {false, format("exception: %s", e.what())};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= checks[i].budget_s) {
            outcome.pass = false;
            outcome.detail += format(" [over budget: %.1f s >= %.0f s]", secs, checks[i].budget_s);
        }
        if (outcome.pass) ++passed;
        std::printf("%s [%zu/9] %s | %.1f s (budget %.0f s) | %s\n",
                    outcome.pass ? "PASS" : "FAIL", i + 1, checks[i].name, secs,
                    checks[i].budget_s, outcome.detail.c_str());
        std::fflush(stdout);
    }

    std::printf("acceptance: %d/9 checks passed\n", passed);
    return passed == 9 ? 0 : 1;
}
