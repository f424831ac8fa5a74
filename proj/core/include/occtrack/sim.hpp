#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "occtrack/box.hpp"
#include "occtrack/image.hpp"

namespace occtrack {

enum class ShapeKind { kRect, kDisc, kBlob };

enum class MotionKind { kLinear, kSinusoidal, kPiecewise };

/// Closed-form position of an object at a frame index, so truth needs no
/// integration and scenario validation can check every frame.
struct MotionSpec {
    MotionKind kind = MotionKind::kLinear;
    /// Per-frame velocity (linear, and carrier for sinusoidal).
    Point2 velocity;
    /// Oscillation added on top of the carrier (sinusoidal only).
    Point2 amplitude;
    double period = 30.0;
    double phase = 0.0;
    struct Segment {
        int frames = 0;
        Point2 velocity;
    };
    std::vector<Segment> segments;

    Point2 position_at(const Point2& start, int frame) const;
    void validate(int total_frames) const;
};

struct ObjectSpec {
    ShapeKind shape = ShapeKind::kRect;
    double intensity = 1.0;
    double width = 14.0;
    double height = 14.0;
    Point2 start;
    MotionSpec motion;
};

/// While active, the named distractor renders above the target.
struct OcclusionEpisode {
    int distractor = 0;
    int from = 0;
    int to = 0;
};

struct ScenarioSpec {
    std::string name = "scenario";
    int field_width = 128;
    int field_height = 128;
    int frames = 60;
    uint64_t seed = 1;
    double background = 0.15;
    /// Gaussian pixel noise sigma; 0 disables it.
    double noise = 0.0;
    ObjectSpec target;
    std::vector<ObjectSpec> distractors;
    std::vector<OcclusionEpisode> episodes;

    /// Throws ValidationError on out-of-range values or objects that leave
    /// the field on any frame.
    void validate() const;
};

struct TruthRow {
    long frame = 0;
    BoundingBox box;
    bool occluded = false;
};

struct Simulation {
    std::vector<Frame> frames;
    std::vector<TruthRow> truth;
};

/// Renders all frames with anti-aliased shapes, additive seeded noise, and
/// 8-bit quantization. The truth occlusion flag is set when active episode
/// distractors cover more than half of the target's own pixels.
Simulation simulate(const ScenarioSpec& spec);

ScenarioSpec scenario_from_json(const std::string& text);
std::string scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec load_scenario(const std::string& path);
void save_scenario(const std::string& path, const ScenarioSpec& spec);

/// CSV: frame,cx,cy,w,h,occluded.
void write_truth_csv(std::ostream& out, const std::vector<TruthRow>& rows);
std::vector<TruthRow> read_truth_csv(std::istream& in);
std::vector<TruthRow> load_truth_csv(const std::string& path);
void save_truth_csv(const std::string& path, const std::vector<TruthRow>& rows);

}  // namespace occtrack
