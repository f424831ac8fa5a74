#include "occtrack/occlusion.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace occtrack {

void OcclusionConfig::validate() const {
    double sum = 0.0;
    for (double w : level_weights) {
        if (!(w > 0.0)) throw std::invalid_argument("level weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("level weights must sum to 1");
    // Thresholds may be zero: epsilon is never negative, so a zero threshold
    // disables the rule, which is the ablation switch.
    if (!(distance_threshold >= 0.0) || !std::isfinite(distance_threshold))
        throw std::invalid_argument("distance threshold must be non-negative");
    if (!(score_threshold >= 0.0 && score_threshold <= 1.0))
        throw std::invalid_argument("score threshold must be in [0, 1]");
    if (!(mix_weight > 0.0 && mix_weight < 1.0))
        throw std::invalid_argument("mix weight must be in (0, 1)");
    if (!(epsilon_threshold >= 0.0) || !std::isfinite(epsilon_threshold))
        throw std::invalid_argument("epsilon threshold must be non-negative");
    if (!(score_norm > 0.0)) throw std::invalid_argument("score normalizer must be positive");
    if (!(distance_norm > 0.0)) throw std::invalid_argument("distance normalizer must be positive");
}

std::optional<double> level_distance(const PeakSet& set) {
    const std::vector<double> dists = compute_distances(set);
    if (dists.empty()) return std::nullopt;
    return *std::min_element(dists.begin(), dists.end());
}

std::optional<double> aggregate_distance(const std::array<std::optional<double>, 3>& dists,
                                         const OcclusionConfig& cfg) {
    double weighted = 0.0;
    double weight_sum = 0.0;
    for (size_t i = 0; i < dists.size(); ++i) {
        if (dists[i]) {
            weighted += cfg.level_weights[i] * *dists[i];
            weight_sum += cfg.level_weights[i];
        }
    }
    if (weight_sum == 0.0) return std::nullopt;
    return weighted / weight_sum;
}

double composite_index(double score, double dis, const OcclusionConfig& cfg) {
    if (!std::isfinite(score) || !std::isfinite(dis))
        throw std::invalid_argument("composite index inputs must be finite");
    return cfg.mix_weight * (score / cfg.score_norm) +
           (1.0 - cfg.mix_weight) * (dis / cfg.distance_norm);
}

OcclusionVerdict judge(const std::array<PeakSet, 3>& levels, double score,
                       const OcclusionConfig& cfg, OcclusionCriterion criterion) {
    cfg.validate();
    if (!std::isfinite(score)) throw std::invalid_argument("score must be finite");

    OcclusionVerdict v;
    v.score = score;
    for (size_t i = 0; i < levels.size(); ++i) v.level_min_dist[i] = level_distance(levels[i]);
    v.dis = aggregate_distance(v.level_min_dist, cfg);

    // A lone clean peak on every level is the unoccluded case, not a missing
    // measurement: the distance term drops out and the score carries the
    // whole index.
    v.epsilon = v.dis ? composite_index(score, *v.dis, cfg) : score / cfg.score_norm;

    switch (criterion) {
        case OcclusionCriterion::kDistance:
            v.occluded = v.dis && *v.dis < cfg.distance_threshold;
            break;
        case OcclusionCriterion::kScore:
            v.occluded = score < cfg.score_threshold;
            break;
        case OcclusionCriterion::kComposite:
            v.occluded = v.epsilon < cfg.epsilon_threshold;
            break;
    }
    return v;
}

void write_verdict_csv_header(std::ostream& out) {
    out << "frame,dis,score,epsilon,occluded\n";
}

void write_verdict_csv_row(std::ostream& out, long frame, const OcclusionVerdict& v) {
    out << frame << ',';
    if (v.dis) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", *v.dis);
        out << buf;
    }
    char buf[80];
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%d\n", v.score, v.epsilon, v.occluded ? 1 : 0);
    out << buf;
}

}  // namespace occtrack
