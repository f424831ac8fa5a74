#pragma once

#include <deque>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "occtrack/appearance.hpp"
#include "occtrack/box.hpp"
#include "occtrack/occlusion.hpp"
#include "occtrack/seqnet.hpp"
#include "occtrack/sim.hpp"

namespace occtrack {

enum class TrackMode { kTracking, kPredicting };

struct PipelineConfig {
    OcclusionConfig occlusion;
    OcclusionCriterion criterion = OcclusionCriterion::kComposite;
    AppearanceConfig appearance;
    /// Candidate peaks taken per response level.
    int top_k = 4;
    /// Observed points fed to the predictor.
    int t_obs = 4;
    /// Points produced per predictor call.
    int n_pred = 2;
    /// Predicted frames allowed before the target is declared lost.
    int max_predict = 20;
    /// Center history retained, real and synthetic.
    int history_capacity = 16;
    /// Field normalizer the predictor was trained with.
    double field_size = 128.0;
    /// Seeds the predictor noise stream of a run.
    uint64_t seed = 1;

    void validate() const;
};

struct HistoryPoint {
    Point2 p;
    long frame = 0;
    /// True when the point came from the predictor, not the appearance model.
    bool synthetic = false;
};

struct TrackState {
    TrackMode mode = TrackMode::kTracking;
    BoundingBox box;
    std::deque<HistoryPoint> history;
    /// Consecutive predicted frames emitted since tracking was last confirmed.
    int frames_predicted = 0;
    /// Predicted centers not yet consumed.
    std::vector<Point2> pending;
    size_t pending_next = 0;
    std::mt19937_64 noise_rng{1};
};

struct FrameResult {
    long frame = 0;
    BoundingBox box;
    TrackMode mode = TrackMode::kTracking;
    OcclusionVerdict verdict;
    /// Set when the appearance model could not evaluate this frame.
    bool blind = false;
};

TrackState init_track_state(const BoundingBox& init_box, long init_frame,
                            const PipelineConfig& cfg);

/// Advances one frame. In tracking mode the appearance model searches around
/// the last box; an unoccluded verdict relocates, an occluded one (with
/// enough history) switches to prediction and consumes the first predicted
/// center. In predicting mode the search recenters on the next predicted
/// point; the first unoccluded verdict reacquires, otherwise the predicted
/// point stands. Exhausted predictions re-predict from the (partly
/// synthetic) history tail. Throws TargetLost beyond max_predict frames.
FrameResult track_step(TrackState& state, const Frame& frame, long frame_id,
                       const Template& templ, const SeqNetParams& predictor,
                       const PipelineConfig& cfg);

struct RunOutcome {
    std::vector<FrameResult> results;
    bool lost = false;
    long lost_frame = -1;
};

/// Runs the tracker over a whole sequence, cropping the template from the
/// first frame at init_box. Frame ids are the sequence indices.
RunOutcome run_sequence(const std::vector<Frame>& frames, const BoundingBox& init_box,
                        const SeqNetParams& predictor, const PipelineConfig& cfg);

/// CSV: frame,cx,cy,w,h,mode,epsilon,occluded,iou. The iou column is filled
/// from truth when given, empty otherwise.
void write_results_csv(std::ostream& out, const std::vector<FrameResult>& results,
                       const std::vector<TruthRow>* truth = nullptr);

/// Inverse of write_results_csv for the fields that round-trip: frame, box,
/// mode, epsilon, occluded. The iou column is ignored.
std::vector<FrameResult> read_results_csv(std::istream& in);
std::vector<FrameResult> load_results_csv(const std::string& path);

}  // namespace occtrack
