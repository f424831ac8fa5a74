#include "occtrack/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "occtrack/errors.hpp"

namespace occtrack {

namespace {

void push_history(TrackState& state, const HistoryPoint& p, const PipelineConfig& cfg) {
    state.history.push_back(p);
    while (state.history.size() > static_cast<size_t>(cfg.history_capacity))
        state.history.pop_front();
}

// Repopulates the pending queue from the most recent t_obs history points.
// On first entry these are all appearance-confirmed; on re-prediction the
// tail is partly synthetic, which is the intended degradation.
void predict(TrackState& state, const SeqNetParams& predictor, const PipelineConfig& cfg) {
    if (state.history.size() < static_cast<size_t>(cfg.t_obs))
        throw std::invalid_argument("prediction requires t_obs history points");
    Trajectory obs;
    const size_t begin = state.history.size() - cfg.t_obs;
    for (size_t i = begin; i < state.history.size(); ++i)
        obs.push_back(state.history[i].p, state.history[i].frame);

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> noise(predictor.noise_dim);
    for (double& v : noise) v = gauss(state.noise_rng);

    const Trajectory pred =
        generator_forward(predictor, obs, noise, {cfg.n_pred, cfg.field_size});
    state.pending = pred.points;
    state.pending_next = 0;
}

struct Observation {
    ResponsePyramid pyramid;
    OcclusionVerdict verdict;
};

std::optional<Observation> observe(const Frame& frame, const Template& templ,
                                   const BoundingBox& at, const PipelineConfig& cfg) {
    try {
        Observation obs{response_pyramid(frame, templ, at, cfg.appearance), {}};
        const std::array<PeakSet, 3> sets{extract_peaks(obs.pyramid.levels[0], cfg.top_k),
                                          extract_peaks(obs.pyramid.levels[1], cfg.top_k),
                                          extract_peaks(obs.pyramid.levels[2], cfg.top_k)};
        obs.verdict = judge(sets, obs.pyramid.score, cfg.occlusion, cfg.criterion);
        return obs;
    } catch (const TrackingFailure&) {
        return std::nullopt;
    }
}

}  // namespace

void PipelineConfig::validate() const {
    occlusion.validate();
    appearance.validate();
    if (top_k < 1 || top_k > appearance.grid * appearance.grid)
        throw std::invalid_argument("top_k must be between 1 and grid*grid");
    if (t_obs < 2) throw std::invalid_argument("t_obs must be at least 2");
    if (n_pred < 1) throw std::invalid_argument("n_pred must be at least 1");
    if (max_predict < 1) throw std::invalid_argument("max_predict must be at least 1");
    if (history_capacity < t_obs)
        throw std::invalid_argument("history capacity must be at least t_obs");
    if (!(field_size > 0.0) || !std::isfinite(field_size))
        throw std::invalid_argument("field size must be positive");
}

TrackState init_track_state(const BoundingBox& init_box, long init_frame,
                            const PipelineConfig& cfg) {
    cfg.validate();
    if (!(init_box.w > 0.0 && init_box.h > 0.0))
        throw std::invalid_argument("initial box needs positive extent");
    TrackState state;
    state.box = init_box;
    state.noise_rng.seed(cfg.seed);
    state.history.push_back({{init_box.cx, init_box.cy}, init_frame, false});
    return state;
}

FrameResult track_step(TrackState& state, const Frame& frame, long frame_id,
                       const Template& templ, const SeqNetParams& predictor,
                       const PipelineConfig& cfg) {
    if (state.history.empty()) throw std::invalid_argument("track state is not initialized");

    FrameResult result;
    result.frame = frame_id;

    if (state.mode == TrackMode::kTracking) {
        const std::optional<Observation> obs = observe(frame, templ, state.box, cfg);
        if (!obs) {
            result.box = state.box;
            result.mode = state.mode;
            result.blind = true;
            return result;
        }
        result.verdict = obs->verdict;
        if (!obs->verdict.occluded) {
            state.box = locate(obs->pyramid, state.box);
            push_history(state, {{state.box.cx, state.box.cy}, frame_id, false}, cfg);
        } else if (state.history.size() >= static_cast<size_t>(cfg.t_obs)) {
            predict(state, predictor, cfg);
            const Point2 c = state.pending[state.pending_next++];
            state.box.cx = c.x;
            state.box.cy = c.y;
            state.mode = TrackMode::kPredicting;
            state.frames_predicted = 1;
            push_history(state, {c, frame_id, true}, cfg);
        }
        // Occluded with too little history: the box freezes in place until
        // the view clears; prediction has nothing trustworthy to work from.
        result.box = state.box;
        result.mode = state.mode;
        return result;
    }

    if (state.frames_predicted >= cfg.max_predict)
        throw TargetLost("no reacquisition within the prediction horizon", frame_id);
    if (state.pending_next >= state.pending.size()) predict(state, predictor, cfg);

    const Point2 c = state.pending[state.pending_next++];
    BoundingBox candidate = state.box;
    candidate.cx = c.x;
    candidate.cy = c.y;

    const std::optional<Observation> obs = observe(frame, templ, candidate, cfg);
    if (obs) result.verdict = obs->verdict;
    result.blind = !obs;

    if (obs && !obs->verdict.occluded) {
        state.box = locate(obs->pyramid, candidate);
        state.mode = TrackMode::kTracking;
        state.frames_predicted = 0;
        state.pending.clear();
        state.pending_next = 0;
        push_history(state, {{state.box.cx, state.box.cy}, frame_id, false}, cfg);
    } else {
        state.box = candidate;
        ++state.frames_predicted;
        push_history(state, {c, frame_id, true}, cfg);
    }
    result.box = state.box;
    result.mode = state.mode;
    return result;
}

RunOutcome run_sequence(const std::vector<Frame>& frames, const BoundingBox& init_box,
                        const SeqNetParams& predictor, const PipelineConfig& cfg) {
    cfg.validate();
    if (frames.empty()) throw std::invalid_argument("sequence must have at least one frame");
    const Template templ = crop_template(frames[0], init_box);
    TrackState state = init_track_state(init_box, 0, cfg);

    RunOutcome out;
    out.results.reserve(frames.size());
    for (size_t i = 1; i < frames.size(); ++i) {
        try {
            out.results.push_back(
                track_step(state, frames[i], static_cast<long>(i), templ, predictor, cfg));
        } catch (const TargetLost& e) {
            out.lost = true;
            out.lost_frame = e.frame();
            break;
        }
    }
    return out;
}

void write_results_csv(std::ostream& out, const std::vector<FrameResult>& results,
                       const std::vector<TruthRow>* truth) {
    std::unordered_map<long, const TruthRow*> by_frame;
    if (truth) {
        for (const TruthRow& r : *truth) by_frame[r.frame] = &r;
    }
    out << "frame,cx,cy,w,h,mode,epsilon,occluded,iou\n";
    for (const FrameResult& r : results) {
        char buf[192];
        std::snprintf(buf, sizeof(buf), "%ld,%.6f,%.6f,%.6f,%.6f,%s,%.6f,%d", r.frame, r.box.cx,
                      r.box.cy, r.box.w, r.box.h,
                      r.mode == TrackMode::kTracking ? "TRACKING" : "PREDICTING",
                      r.verdict.epsilon, r.verdict.occluded ? 1 : 0);
        out << buf;
        const auto it = by_frame.find(r.frame);
        if (it != by_frame.end()) {
            std::snprintf(buf, sizeof(buf), ",%.6f", iou(r.box, it->second->box));
            out << buf;
        } else {
            out << ',';
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed to write results CSV");
}

std::vector<FrameResult> read_results_csv(std::istream& in) {
    std::vector<FrameResult> results;
    std::string line;
    bool first = true;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("frame", 0) == 0) continue;
        }
        FrameResult r;
        char mode[16] = {0};
        int occ = 0;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%lf,%lf,%15[^,],%lf,%d", &r.frame, &r.box.cx,
                        &r.box.cy, &r.box.w, &r.box.h, mode, &r.verdict.epsilon, &occ) != 8)
            throw std::invalid_argument("bad results CSV row at line " + std::to_string(lineno));
        const std::string m(mode);
        if (m == "TRACKING")
            r.mode = TrackMode::kTracking;
        else if (m == "PREDICTING")
            r.mode = TrackMode::kPredicting;
        else
            throw std::invalid_argument("unknown mode at line " + std::to_string(lineno));
        r.verdict.occluded = occ != 0;
        results.push_back(r);
    }
    return results;
}

std::vector<FrameResult> load_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_results_csv(in);
}

}  // namespace occtrack
