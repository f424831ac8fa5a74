#pragma once

// Shared end-to-end scenario fixtures: seeded synthetic scenes where a cover
// object occludes a moving target mid-sequence. Used by the integration
// tests and by the acceptance gate, so both exercise identical geometry.

#include <string>

#include "occtrack/sim.hpp"

namespace fixtures {

// Bright 12x12 square sliding right at one pixel per frame while a
// camouflage cover (same intensity as the background) dashes in vertically,
// sits across the target's path for several frames, and dashes away. While
// the cover overlaps the target its pixels are simply erased, the search
// patch goes flat, and the correlation score collapses to the zero-variance
// floor of 0.5; recovering afterwards requires riding the motion predictor
// through the blackout. The index varies path height, arrival frame, and
// dwell length so the scenarios stress slightly different timings. Sensor
// noise is zero to keep the covered frames exactly flat.
inline occtrack::ScenarioSpec crossing_scenario(int index) {
    const double ty = 30.0 + 4.0 * index;  // path height 30..66
    const int meet = 20 + (index % 3);     // frame the cover starts its dash
    const int sit = 6 + (index % 4);       // fully-covered dwell, frames
    const double cover_w = 12.0 + 2.0 * sit + 2.0;
    const bool from_below = ty <= 48.0;
    const double dash = 38.0 / 3.0;  // cover travel per dash frame

    occtrack::ScenarioSpec s;
    s.name = "crossing_" + std::to_string(index);
    s.field_width = 100;
    s.field_height = 100;
    s.frames = 44;
    s.seed = 100 + static_cast<uint64_t>(index);
    s.background = 0.15;
    s.noise = 0.0;

    s.target.shape = occtrack::ShapeKind::kRect;
    s.target.intensity = 1.0;
    s.target.width = 12.0;
    s.target.height = 12.0;
    s.target.start = {18.0, ty};
    s.target.motion.kind = occtrack::MotionKind::kLinear;
    s.target.motion.velocity = {1.0, 0.0};

    occtrack::ObjectSpec d;
    d.shape = occtrack::ShapeKind::kRect;
    d.intensity = 0.15;  // matches the background: the cover erases, never attracts
    d.width = cover_w;
    d.height = 16.0;
    d.start = {18.0 + (meet + 3 + sit / 2.0), ty + (from_below ? 38.0 : -38.0)};
    d.motion.kind = occtrack::MotionKind::kPiecewise;
    const double vy = from_below ? -dash : dash;
    d.motion.segments = {{meet, {0.0, 0.0}},
                         {3, {0.0, vy}},
                         {sit, {0.0, 0.0}},
                         {3, {0.0, -vy}},
                         {s.frames - meet - 6 - sit, {0.0, 0.0}}};
    s.distractors.push_back(d);
    s.episodes.push_back({0, 0, s.frames - 1});
    return s;
}

// Same layout with a cover shorter than the target: one- or two-pixel strips
// stay visible through the dwell, so the match score (and with it the
// occlusion index) lands mid-range instead of at the flat-patch floor.
// Threshold sweeps need frames that different thresholds classify
// differently, which the crisp crossing scenarios never produce.
inline occtrack::ScenarioSpec graze_scenario(int index, double cover_height) {
    occtrack::ScenarioSpec s = crossing_scenario(index);
    s.name = "graze_" + std::to_string(index);
    s.distractors[0].height = cover_height;
    return s;
}

// Distractor-free drift across the same field, for invariants that must hold
// on clean sequences too.
inline occtrack::ScenarioSpec clean_scenario() {
    occtrack::ScenarioSpec s;
    s.name = "clean_drift";
    s.field_width = 100;
    s.field_height = 100;
    s.frames = 44;
    s.seed = 99;
    s.background = 0.15;
    s.noise = 0.0;
    s.target.shape = occtrack::ShapeKind::kRect;
    s.target.intensity = 1.0;
    s.target.width = 12.0;
    s.target.height = 12.0;
    s.target.start = {18.0, 48.0};
    s.target.motion.kind = occtrack::MotionKind::kLinear;
    s.target.motion.velocity = {1.0, 0.25};
    return s;
}

}  // namespace fixtures
