#include "occtrack/metrics.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <stdexcept>
#include <vector>

namespace occtrack {
namespace {

FrameResult make_result(long frame, double cx, double cy, TrackMode mode, bool occluded) {
    FrameResult r;
    r.frame = frame;
    r.box = {cx, cy, 10.0, 10.0};
    r.mode = mode;
    r.verdict.occluded = occluded;
    return r;
}

TruthRow make_truth(long frame, double cx, double cy, bool occluded) {
    return {frame, {cx, cy, 10.0, 10.0}, occluded};
}

TEST(Evaluate, MeanIouCountsOnlyOverlappingFrames) {
    // Perfect hit, half-offset hit, and a total miss.
    const std::vector<FrameResult> results = {
        make_result(0, 50.0, 50.0, TrackMode::kTracking, false),
        make_result(1, 55.0, 50.0, TrackMode::kTracking, false),
        make_result(2, 90.0, 90.0, TrackMode::kTracking, false)};
    const std::vector<TruthRow> truth = {make_truth(0, 50.0, 50.0, false),
                                         make_truth(1, 50.0, 50.0, false),
                                         make_truth(2, 50.0, 50.0, false)};
    const MetricsReport rep = evaluate(results, truth);
    EXPECT_EQ(rep.frames, 3);
    EXPECT_EQ(rep.failures, 1);
    // IoU of a 5px offset on 10px boxes: 50 / 150 = 1/3.
    EXPECT_NEAR(rep.mean_iou, (1.0 + 1.0 / 3.0) / 2.0, 1e-12);
    EXPECT_FALSE(rep.predictor_ade.has_value());
}

TEST(Evaluate, ConfusionCountsDrivePrecisionAndRecall) {
    const std::vector<FrameResult> results = {
        make_result(0, 50.0, 50.0, TrackMode::kTracking, true),    // tp
        make_result(1, 50.0, 50.0, TrackMode::kTracking, true),    // fp
        make_result(2, 50.0, 50.0, TrackMode::kTracking, false),   // fn
        make_result(3, 50.0, 50.0, TrackMode::kTracking, false)};  // tn
    const std::vector<TruthRow> truth = {make_truth(0, 50.0, 50.0, true),
                                         make_truth(1, 50.0, 50.0, false),
                                         make_truth(2, 50.0, 50.0, true),
                                         make_truth(3, 50.0, 50.0, false)};
    const EvalTally tally = evaluate_tally(results, truth);
    EXPECT_EQ(tally.tp, 1);
    EXPECT_EQ(tally.fp, 1);
    EXPECT_EQ(tally.fn, 1);
    EXPECT_EQ(tally.tn, 1);
    const MetricsReport rep = tally.report();
    EXPECT_DOUBLE_EQ(rep.occlusion_precision, 0.5);
    EXPECT_DOUBLE_EQ(rep.occlusion_recall, 0.5);
}

TEST(Evaluate, VacuousDenominatorsCountAsPerfect) {
    const std::vector<FrameResult> results = {
        make_result(0, 50.0, 50.0, TrackMode::kTracking, false)};
    const std::vector<TruthRow> truth = {make_truth(0, 50.0, 50.0, false)};
    const MetricsReport rep = evaluate(results, truth);
    EXPECT_DOUBLE_EQ(rep.occlusion_precision, 1.0);
    EXPECT_DOUBLE_EQ(rep.occlusion_recall, 1.0);
}

TEST(Evaluate, PredictorAdeAveragesCenterErrorOverPredictedFrames) {
    const std::vector<FrameResult> results = {
        make_result(0, 50.0, 50.0, TrackMode::kTracking, false),
        make_result(1, 53.0, 50.0, TrackMode::kPredicting, true),
        make_result(2, 50.0, 54.0, TrackMode::kPredicting, true)};
    const std::vector<TruthRow> truth = {make_truth(0, 50.0, 50.0, false),
                                         make_truth(1, 50.0, 50.0, true),
                                         make_truth(2, 50.0, 50.0, true)};
    const MetricsReport rep = evaluate(results, truth);
    ASSERT_TRUE(rep.predictor_ade.has_value());
    EXPECT_NEAR(*rep.predictor_ade, 3.5, 1e-12);
}

TEST(Evaluate, MissingTruthRowThrows) {
    const std::vector<FrameResult> results = {
        make_result(7, 50.0, 50.0, TrackMode::kTracking, false)};
    const std::vector<TruthRow> truth = {make_truth(0, 50.0, 50.0, false)};
    EXPECT_THROW(evaluate(results, truth), std::invalid_argument);
}

TEST(EvalTally, MergeEqualsEvaluatingTheUnion) {
    const std::vector<FrameResult> run_a = {
        make_result(0, 50.0, 50.0, TrackMode::kTracking, false),
        make_result(1, 55.0, 50.0, TrackMode::kPredicting, true)};
    const std::vector<FrameResult> run_b = {
        make_result(0, 90.0, 90.0, TrackMode::kTracking, true),
        make_result(1, 50.0, 52.0, TrackMode::kPredicting, false)};
    const std::vector<TruthRow> truth = {make_truth(0, 50.0, 50.0, false),
                                         make_truth(1, 50.0, 50.0, true)};

    EvalTally merged = evaluate_tally(run_a, truth);
    merged.merge(evaluate_tally(run_b, truth));

    std::vector<FrameResult> all = run_a;
    all.insert(all.end(), run_b.begin(), run_b.end());
    const EvalTally direct = evaluate_tally(all, truth);

    EXPECT_DOUBLE_EQ(merged.iou_sum, direct.iou_sum);
    EXPECT_EQ(merged.iou_frames, direct.iou_frames);
    EXPECT_EQ(merged.failures, direct.failures);
    EXPECT_EQ(merged.tp, direct.tp);
    EXPECT_EQ(merged.fp, direct.fp);
    EXPECT_EQ(merged.fn, direct.fn);
    EXPECT_EQ(merged.tn, direct.tn);
    EXPECT_DOUBLE_EQ(merged.ade_sum, direct.ade_sum);
    EXPECT_EQ(merged.ade_frames, direct.ade_frames);
    EXPECT_EQ(merged.frames, direct.frames);
}

TEST(MetricsCsv, RowFormatsFixedPrecisionAndOptionalAde) {
    MetricsReport rep;
    rep.frames = 10;
    rep.mean_iou = 0.75;
    rep.failures = 2;
    rep.occlusion_precision = 1.0;
    rep.occlusion_recall = 0.5;

    std::ostringstream out;
    write_metrics_csv_header(out);
    write_metrics_csv_row(out, rep);
    rep.predictor_ade = 1.25;
    write_metrics_csv_row(out, rep);
    EXPECT_EQ(out.str(),
              "frames,mean_iou,failures,occlusion_precision,occlusion_recall,predictor_ade\n"
              "10,0.750000,2,1.000000,0.500000,\n"
              "10,0.750000,2,1.000000,0.500000,1.250000\n");
}

}  // namespace
}  // namespace occtrack
