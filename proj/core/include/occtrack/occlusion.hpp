#pragma once

#include <array>
#include <iosfwd>
#include <optional>

#include "occtrack/heatmap.hpp"

namespace occtrack {

/// Which signal decides the occlusion verdict.
enum class OcclusionCriterion { kDistance, kScore, kComposite };

struct OcclusionConfig {
    /// Per-level weights for aggregating nearest-interferer distances,
    /// ordered fine to coarse. Must be positive and sum to 1.
    std::array<double, 3> level_weights{0.2, 0.5, 0.3};
    /// Occluded when the aggregated distance drops below this (grid cells).
    double distance_threshold = 3.25;
    /// Occluded when the classification score drops below this.
    double score_threshold = 0.85;
    /// Mixing weight between the score term and the distance term.
    double mix_weight = 0.8;
    /// Occluded when the composite index drops below this.
    double epsilon_threshold = 0.85;
    /// Normalizers bringing both terms to a comparable unit scale.
    double score_norm = 0.95;
    double distance_norm = 5.5;

    void validate() const;
};

struct OcclusionVerdict {
    /// Weighted nearest-interferer distance; absent when no level saw one.
    std::optional<double> dis;
    double score = 0.0;
    double epsilon = 0.0;
    bool occluded = false;
    std::array<std::optional<double>, 3> level_min_dist;
};

/// Nearest interferer distance on one level: min over compute_distances,
/// absent when the level has fewer than two peaks.
std::optional<double> level_distance(const PeakSet& set);

/// Weighted mean of the per-level distances over the levels that have one,
/// with weights renormalized to the present levels. Absent when all are.
std::optional<double> aggregate_distance(const std::array<std::optional<double>, 3>& dists,
                                         const OcclusionConfig& cfg);

/// mix_weight * score/score_norm + (1 - mix_weight) * dis/distance_norm.
double composite_index(double score, double dis, const OcclusionConfig& cfg);

/// Full per-frame occlusion decision from the three peak sets and the
/// classification score. When no level has an interferer the composite index
/// degrades to the score term alone at full weight.
OcclusionVerdict judge(const std::array<PeakSet, 3>& levels, double score,
                       const OcclusionConfig& cfg,
                       OcclusionCriterion criterion = OcclusionCriterion::kComposite);

/// CSV row per frame: frame, dis, score, epsilon, occluded.
void write_verdict_csv_header(std::ostream& out);
void write_verdict_csv_row(std::ostream& out, long frame, const OcclusionVerdict& v);

}  // namespace occtrack
