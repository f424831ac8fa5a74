#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "occtrack/pipeline.hpp"
#include "occtrack/sim.hpp"

namespace occtrack {

struct MetricsReport {
    /// Mean IoU over frames where the tracked box overlaps truth at all.
    double mean_iou = 0.0;
    /// Frames with zero overlap.
    int failures = 0;
    /// Occlusion detection quality against the truth flag. Vacuous
    /// denominators (no positives at all) count as perfect.
    double occlusion_precision = 1.0;
    double occlusion_recall = 1.0;
    /// Mean center error over predicted frames; absent when none occurred.
    std::optional<double> predictor_ade;
    int frames = 0;
};

/// Raw confusion and error sums, mergeable across runs so sweeps aggregate
/// without averaging averages.
struct EvalTally {
    double iou_sum = 0.0;
    int iou_frames = 0;
    int failures = 0;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    int tn = 0;
    double ade_sum = 0.0;
    int ade_frames = 0;
    int frames = 0;

    void merge(const EvalTally& other);
    MetricsReport report() const;
};

/// Compares per-frame results with the simulator truth, matching rows by
/// frame id. Every result frame must have a truth row.
EvalTally evaluate_tally(const std::vector<FrameResult>& results,
                         const std::vector<TruthRow>& truth);
MetricsReport evaluate(const std::vector<FrameResult>& results,
                       const std::vector<TruthRow>& truth);

void write_metrics_csv_header(std::ostream& out);
void write_metrics_csv_row(std::ostream& out, const MetricsReport& report);

}  // namespace occtrack
