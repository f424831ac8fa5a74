#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "occtrack/gan.hpp"
#include "occtrack/metrics.hpp"
#include "occtrack/pipeline.hpp"
#include "occtrack/sim.hpp"
#include "occtrack/trajectory.hpp"

namespace occtrack {

/// Occlusion-rule parameter varied by a sweep. The sweep also selects the
/// matching decision criterion: distance and score thresholds are evaluated
/// under their single-signal rules, the rest under the composite rule.
enum class SweepParam { kDistanceThreshold, kScoreThreshold, kEpsilonThreshold, kMixWeight };

struct SweepRow {
    double value = 0.0;
    MetricsReport report;
};

/// Runs every scenario at every parameter value and aggregates per value.
/// Deterministic: scenarios carry their own seeds and the pipeline noise
/// stream is seeded from base.seed.
std::vector<SweepRow> sweep(const std::vector<ScenarioSpec>& scenarios, SweepParam param,
                            const std::vector<double>& values, const PipelineConfig& base,
                            const SeqNetParams& predictor);

void write_sweep_csv(std::ostream& out, SweepParam param, const std::vector<SweepRow>& rows);
const char* sweep_param_name(SweepParam param);

/// Constant-velocity reference: extrapolates the displacement between the
/// last two observed points.
Trajectory baseline_predictor(const Trajectory& observed, int n_pred);

/// Straight-line trajectories with random start, heading and per-axis speed
/// up to max_speed, optional Gaussian jitter, kept inside the field with a
/// margin.
std::vector<Trajectory> make_linear_trajectories(int count, int length, double field,
                                                 double max_speed, double jitter, uint64_t seed);

/// Half linear, half sinusoidal-drift trajectories for the mixed-motion
/// studies.
std::vector<Trajectory> make_mixed_trajectories(int count, int length, double field,
                                                double max_speed, double jitter, uint64_t seed);

}  // namespace occtrack
