#include "occtrack/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace occtrack {

namespace {

PipelineConfig apply_sweep_value(const PipelineConfig& base, SweepParam param, double value) {
    PipelineConfig cfg = base;
    switch (param) {
        case SweepParam::kDistanceThreshold:
            cfg.occlusion.distance_threshold = value;
            cfg.criterion = OcclusionCriterion::kDistance;
            break;
        case SweepParam::kScoreThreshold:
            cfg.occlusion.score_threshold = value;
            cfg.criterion = OcclusionCriterion::kScore;
            break;
        case SweepParam::kEpsilonThreshold:
            cfg.occlusion.epsilon_threshold = value;
            cfg.criterion = OcclusionCriterion::kComposite;
            break;
        case SweepParam::kMixWeight:
            cfg.occlusion.mix_weight = value;
            cfg.criterion = OcclusionCriterion::kComposite;
            break;
    }
    cfg.validate();
    return cfg;
}

// Velocity that keeps a straight path from start inside [margin, field - margin].
double fit_velocity(double start, double speed, int length, double field, double margin) {
    if (length < 2) return 0.0;
    const double end = start + speed * (length - 1);
    if (end >= margin && end <= field - margin) return speed;
    const double flipped = start - speed * (length - 1);
    if (flipped >= margin && flipped <= field - margin) return -speed;
    const double clamped_end = std::clamp(end, margin, field - margin);
    return (clamped_end - start) / (length - 1);
}

}  // namespace

std::vector<SweepRow> sweep(const std::vector<ScenarioSpec>& scenarios, SweepParam param,
                            const std::vector<double>& values, const PipelineConfig& base,
                            const SeqNetParams& predictor) {
    if (scenarios.empty()) throw std::invalid_argument("sweep needs at least one scenario");
    if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
    predictor.validate();

    std::vector<EvalTally> tallies(values.size());
    for (const ScenarioSpec& scenario : scenarios) {
        const Simulation sim = simulate(scenario);
        for (size_t i = 0; i < values.size(); ++i) {
            const PipelineConfig cfg = apply_sweep_value(base, param, values[i]);
            const RunOutcome out = run_sequence(sim.frames, sim.truth.front().box, predictor, cfg);
            tallies[i].merge(evaluate_tally(out.results, sim.truth));
        }
    }

    std::vector<SweepRow> rows(values.size());
    for (size_t i = 0; i < values.size(); ++i) rows[i] = {values[i], tallies[i].report()};
    return rows;
}

const char* sweep_param_name(SweepParam param) {
    switch (param) {
        case SweepParam::kDistanceThreshold: return "distance_threshold";
        case SweepParam::kScoreThreshold: return "score_threshold";
        case SweepParam::kEpsilonThreshold: return "epsilon_threshold";
        case SweepParam::kMixWeight: return "mix_weight";
    }
    return "unknown";
}

void write_sweep_csv(std::ostream& out, SweepParam param, const std::vector<SweepRow>& rows) {
    out << "param,value,frames,mean_iou,failures,occlusion_precision,occlusion_recall,"
           "predictor_ade\n";
    for (const SweepRow& r : rows) {
        char buf[224];
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%d,%.6f,%d,%.6f,%.6f,", sweep_param_name(param),
                      r.value, r.report.frames, r.report.mean_iou, r.report.failures,
                      r.report.occlusion_precision, r.report.occlusion_recall);
        out << buf;
        if (r.report.predictor_ade) {
            std::snprintf(buf, sizeof(buf), "%.6f", *r.report.predictor_ade);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed to write sweep CSV");
}

Trajectory baseline_predictor(const Trajectory& observed, int n_pred) {
    observed.validate();
    if (observed.size() < 2)
        throw std::invalid_argument("baseline predictor needs at least two observed points");
    if (n_pred < 1) throw std::invalid_argument("n_pred must be at least 1");

    const size_t m = observed.size();
    const Point2 delta{observed.points[m - 1].x - observed.points[m - 2].x,
                       observed.points[m - 1].y - observed.points[m - 2].y};
    Trajectory out;
    for (int j = 1; j <= n_pred; ++j) {
        out.push_back({observed.points.back().x + delta.x * j,
                       observed.points.back().y + delta.y * j},
                      observed.frame_ids.back() + j);
    }
    return out;
}

std::vector<Trajectory> make_linear_trajectories(int count, int length, double field,
                                                 double max_speed, double jitter, uint64_t seed) {
    if (count < 1 || length < 2) throw std::invalid_argument("need count >= 1 and length >= 2");
    if (!(field > 0.0 && max_speed >= 0.0 && jitter >= 0.0))
        throw std::invalid_argument("field must be positive, speeds non-negative");

    std::mt19937_64 rng(seed);
    const double margin = field * 0.15;
    std::uniform_real_distribution<double> start_dist(margin, field - margin);
    std::uniform_real_distribution<double> speed_dist(-max_speed, max_speed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Trajectory> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const Point2 start{start_dist(rng), start_dist(rng)};
        const Point2 vel{fit_velocity(start.x, speed_dist(rng), length, field, margin),
                         fit_velocity(start.y, speed_dist(rng), length, field, margin)};
        Trajectory traj;
        for (int t = 0; t < length; ++t) {
            Point2 p{start.x + vel.x * t, start.y + vel.y * t};
            if (jitter > 0.0) {
                p.x += gauss(rng) * jitter;
                p.y += gauss(rng) * jitter;
            }
            traj.push_back(p, t);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

std::vector<Trajectory> make_mixed_trajectories(int count, int length, double field,
                                                double max_speed, double jitter, uint64_t seed) {
    if (count < 1 || length < 2) throw std::invalid_argument("need count >= 1 and length >= 2");
    if (!(field > 0.0 && max_speed >= 0.0 && jitter >= 0.0))
        throw std::invalid_argument("field must be positive, speeds non-negative");

    std::mt19937_64 rng(seed);
    const double amp_max = 5.0;
    const double margin = field * 0.15 + amp_max;
    std::uniform_real_distribution<double> start_dist(margin, field - margin);
    std::uniform_real_distribution<double> speed_dist(-max_speed, max_speed);
    std::uniform_real_distribution<double> amp_dist(1.0, amp_max);
    std::uniform_real_distribution<double> period_dist(15.0, 40.0);
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<Trajectory> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        const Point2 start{start_dist(rng), start_dist(rng)};
        const Point2 vel{fit_velocity(start.x, speed_dist(rng), length, field, margin),
                         fit_velocity(start.y, speed_dist(rng), length, field, margin)};
        const bool wavy = k % 2 == 1;
        const Point2 amp = wavy ? Point2{amp_dist(rng), amp_dist(rng)} : Point2{0.0, 0.0};
        const double period = period_dist(rng);
        const double phase = phase_dist(rng);
        Trajectory traj;
        for (int t = 0; t < length; ++t) {
            const double s = wavy ? std::sin(2.0 * std::numbers::pi * t / period + phase) : 0.0;
            Point2 p{start.x + vel.x * t + amp.x * s, start.y + vel.y * t + amp.y * s};
            if (jitter > 0.0) {
                p.x += gauss(rng) * jitter;
                p.y += gauss(rng) * jitter;
            }
            traj.push_back(p, t);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

}  // namespace occtrack
