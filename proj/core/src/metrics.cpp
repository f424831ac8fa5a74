#include "occtrack/metrics.hpp"

#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace occtrack {

void EvalTally::merge(const EvalTally& other) {
    iou_sum += other.iou_sum;
    iou_frames += other.iou_frames;
    failures += other.failures;
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    tn += other.tn;
    ade_sum += other.ade_sum;
    ade_frames += other.ade_frames;
    frames += other.frames;
}

MetricsReport EvalTally::report() const {
    MetricsReport r;
    r.frames = frames;
    r.failures = failures;
    r.mean_iou = iou_frames > 0 ? iou_sum / iou_frames : 0.0;
    r.occlusion_precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 1.0;
    r.occlusion_recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 1.0;
    if (ade_frames > 0) r.predictor_ade = ade_sum / ade_frames;
    return r;
}

EvalTally evaluate_tally(const std::vector<FrameResult>& results,
                         const std::vector<TruthRow>& truth) {
    std::unordered_map<long, const TruthRow*> by_frame;
    for (const TruthRow& r : truth) by_frame[r.frame] = &r;

    EvalTally tally;
    for (const FrameResult& r : results) {
        const auto it = by_frame.find(r.frame);
        if (it == by_frame.end())
            throw std::invalid_argument("no truth row for frame " + std::to_string(r.frame));
        const TruthRow& t = *it->second;
        ++tally.frames;

        const double overlap = iou(r.box, t.box);
        if (overlap > 0.0) {
            tally.iou_sum += overlap;
            ++tally.iou_frames;
        } else {
            ++tally.failures;
        }

        if (r.verdict.occluded && t.occluded) ++tally.tp;
        else if (r.verdict.occluded && !t.occluded) ++tally.fp;
        else if (!r.verdict.occluded && t.occluded) ++tally.fn;
        else ++tally.tn;

        if (r.mode == TrackMode::kPredicting) {
            tally.ade_sum += euclidean({r.box.cx, r.box.cy}, {t.box.cx, t.box.cy});
            ++tally.ade_frames;
        }
    }
    return tally;
}

MetricsReport evaluate(const std::vector<FrameResult>& results,
                       const std::vector<TruthRow>& truth) {
    return evaluate_tally(results, truth).report();
}

void write_metrics_csv_header(std::ostream& out) {
    out << "frames,mean_iou,failures,occlusion_precision,occlusion_recall,predictor_ade\n";
}

void write_metrics_csv_row(std::ostream& out, const MetricsReport& report) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%d,%.6f,%.6f,", report.frames, report.mean_iou,
                  report.failures, report.occlusion_precision, report.occlusion_recall);
    out << buf;
    if (report.predictor_ade) {
        std::snprintf(buf, sizeof(buf), "%.6f", *report.predictor_ade);
        out << buf;
    }
    out << '\n';
}

}  // namespace occtrack
