#include "occtrack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "occtrack/errors.hpp"

namespace occtrack {

namespace {

using nlohmann::json;

Point2 segment_position(const std::vector<MotionSpec::Segment>& segments, const Point2& start,
                        int frame) {
    Point2 pos = start;
    int remaining = frame;
    for (const MotionSpec::Segment& seg : segments) {
        const int take = std::min(remaining, seg.frames);
        pos.x += seg.velocity.x * take;
        pos.y += seg.velocity.y * take;
        remaining -= take;
        if (remaining == 0) break;
    }
    return pos;
}

// Pixel-coverage alpha of one object at pixel (row, col); pixel centers sit
// at half-integer coordinates.
double object_alpha(const ObjectSpec& obj, const Point2& center, int row, int col) {
    const double px = col + 0.5;
    const double py = row + 0.5;
    switch (obj.shape) {
        case ShapeKind::kRect: {
            const double ox = std::min(static_cast<double>(col + 1), center.x + obj.width / 2.0) -
                              std::max(static_cast<double>(col), center.x - obj.width / 2.0);
            const double oy = std::min(static_cast<double>(row + 1), center.y + obj.height / 2.0) -
                              std::max(static_cast<double>(row), center.y - obj.height / 2.0);
            return std::max(0.0, ox) * std::max(0.0, oy);
        }
        case ShapeKind::kDisc: {
            const double rx = obj.width / 2.0;
            const double ry = obj.height / 2.0;
            const double d = std::sqrt(((px - center.x) / rx) * ((px - center.x) / rx) +
                                       ((py - center.y) / ry) * ((py - center.y) / ry));
            return std::clamp((1.0 - d) * std::min(rx, ry) + 0.5, 0.0, 1.0);
        }
        case ShapeKind::kBlob: {
            const double sx = obj.width / 4.0;
            const double sy = obj.height / 4.0;
            const double dx = (px - center.x) / sx;
            const double dy = (py - center.y) / sy;
            return std::exp(-0.5 * (dx * dx + dy * dy));
        }
    }
    return 0.0;
}

// Render bounds of an object (blob tails included), clamped to the field.
IntRect object_bounds(const ObjectSpec& obj, const Point2& center, int width, int height) {
    const double extend = obj.shape == ShapeKind::kBlob ? 1.0 : 0.0;
    const double hw = obj.width / 2.0 * (1.0 + extend) + 2.0;
    const double hh = obj.height / 2.0 * (1.0 + extend) + 2.0;
    IntRect r;
    r.x0 = std::max(0, static_cast<int>(std::floor(center.x - hw)));
    r.y0 = std::max(0, static_cast<int>(std::floor(center.y - hh)));
    r.w = std::min(width, static_cast<int>(std::ceil(center.x + hw))) - r.x0;
    r.h = std::min(height, static_cast<int>(std::ceil(center.y + hh))) - r.y0;
    return r;
}

void composite(Frame& frame, const ObjectSpec& obj, const Point2& center) {
    const IntRect b = object_bounds(obj, center, frame.width, frame.height);
    for (int r = b.y0; r < b.y0 + b.h; ++r) {
        for (int c = b.x0; c < b.x0 + b.w; ++c) {
            const double a = object_alpha(obj, center, r, c);
            if (a > 0.0) frame.at(r, c) = frame.at(r, c) * (1.0 - a) + a * obj.intensity;
        }
    }
}

std::string shape_name(ShapeKind s) {
    switch (s) {
        case ShapeKind::kRect: return "rect";
        case ShapeKind::kDisc: return "disc";
        case ShapeKind::kBlob: return "blob";
    }
    return "rect";
}

ShapeKind shape_from(const std::string& s) {
    if (s == "rect") return ShapeKind::kRect;
    if (s == "disc") return ShapeKind::kDisc;
    if (s == "blob") return ShapeKind::kBlob;
    throw ValidationError("unknown shape: " + s);
}

std::string motion_name(MotionKind m) {
    switch (m) {
        case MotionKind::kLinear: return "linear";
        case MotionKind::kSinusoidal: return "sinusoidal";
        case MotionKind::kPiecewise: return "piecewise";
    }
    return "linear";
}

MotionKind motion_from(const std::string& s) {
    if (s == "linear") return MotionKind::kLinear;
    if (s == "sinusoidal") return MotionKind::kSinusoidal;
    if (s == "piecewise") return MotionKind::kPiecewise;
    throw ValidationError("unknown motion kind: " + s);
}

json point_to_json(const Point2& p) {
    return json::array({p.x, p.y});
}

Point2 point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("point must be a [x, y] array");
    return {j[0].get<double>(), j[1].get<double>()};
}

json motion_to_json(const MotionSpec& m) {
    json j;
    j["kind"] = motion_name(m.kind);
    j["velocity"] = point_to_json(m.velocity);
    if (m.kind == MotionKind::kSinusoidal) {
        j["amplitude"] = point_to_json(m.amplitude);
        j["period"] = m.period;
        j["phase"] = m.phase;
    }
    if (m.kind == MotionKind::kPiecewise) {
        json segs = json::array();
        for (const MotionSpec::Segment& s : m.segments)
            segs.push_back({{"frames", s.frames}, {"velocity", point_to_json(s.velocity)}});
        j["segments"] = segs;
    }
    return j;
}

MotionSpec motion_from_json(const json& j) {
    MotionSpec m;
    m.kind = motion_from(j.value("kind", "linear"));
    if (j.contains("velocity")) m.velocity = point_from_json(j.at("velocity"));
    if (j.contains("amplitude")) m.amplitude = point_from_json(j.at("amplitude"));
    m.period = j.value("period", 30.0);
    m.phase = j.value("phase", 0.0);
    if (j.contains("segments")) {
        for (const json& s : j.at("segments"))
            m.segments.push_back({s.at("frames").get<int>(), point_from_json(s.at("velocity"))});
    }
    return m;
}

json object_to_json(const ObjectSpec& o) {
    return {{"shape", shape_name(o.shape)}, {"intensity", o.intensity},
            {"size", json::array({o.width, o.height})}, {"start", point_to_json(o.start)},
            {"motion", motion_to_json(o.motion)}};
}

ObjectSpec object_from_json(const json& j) {
    ObjectSpec o;
    o.shape = shape_from(j.value("shape", "rect"));
    o.intensity = j.value("intensity", 1.0);
    if (j.contains("size")) {
        const json& s = j.at("size");
        if (!s.is_array() || s.size() != 2) throw ValidationError("size must be a [w, h] array");
        o.width = s[0].get<double>();
        o.height = s[1].get<double>();
    }
    o.start = point_from_json(j.at("start"));
    if (j.contains("motion")) o.motion = motion_from_json(j.at("motion"));
    return o;
}

}  // namespace

Point2 MotionSpec::position_at(const Point2& start, int frame) const {
    switch (kind) {
        case MotionKind::kLinear:
            return {start.x + velocity.x * frame, start.y + velocity.y * frame};
        case MotionKind::kSinusoidal: {
            const double s = std::sin(2.0 * std::numbers::pi * frame / period + phase);
            return {start.x + velocity.x * frame + amplitude.x * s,
                    start.y + velocity.y * frame + amplitude.y * s};
        }
        case MotionKind::kPiecewise:
            return segment_position(segments, start, frame);
    }
    return start;
}

void MotionSpec::validate(int total_frames) const {
    auto finite = [](const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); };
    if (!finite(velocity) || !finite(amplitude)) throw ValidationError("motion fields must be finite");
    if (kind == MotionKind::kSinusoidal && !(period > 0.0))
        throw ValidationError("sinusoidal period must be positive");
    if (kind == MotionKind::kPiecewise) {
        if (segments.empty()) throw ValidationError("piecewise motion needs segments");
        int total = 0;
        for (const Segment& s : segments) {
            if (s.frames < 1) throw ValidationError("segment length must be at least one frame");
            if (!finite(s.velocity)) throw ValidationError("motion fields must be finite");
            total += s.frames;
        }
        if (total < total_frames - 1)
            throw ValidationError("piecewise segments must cover the whole scenario");
    }
}

void ScenarioSpec::validate() const {
    if (field_width < 8 || field_height < 8) throw ValidationError("field must be at least 8x8");
    if (frames < 1) throw ValidationError("scenario needs at least one frame");
    if (!(background >= 0.0 && background <= 1.0))
        throw ValidationError("background must be in [0, 1]");
    if (!(noise >= 0.0 && noise <= 0.5)) throw ValidationError("noise sigma must be in [0, 0.5]");

    std::vector<const ObjectSpec*> objects{&target};
    for (const ObjectSpec& d : distractors) objects.push_back(&d);
    for (const ObjectSpec* o : objects) {
        if (!(o->intensity >= 0.0 && o->intensity <= 1.0))
            throw ValidationError("object intensity must be in [0, 1]");
        if (!(o->width >= 2.0 && o->height >= 2.0))
            throw ValidationError("object extent must be at least 2 pixels");
        o->motion.validate(frames);
        for (int f = 0; f < frames; ++f) {
            const Point2 c = o->motion.position_at(o->start, f);
            if (c.x - o->width / 2.0 < 0.0 || c.x + o->width / 2.0 > field_width ||
                c.y - o->height / 2.0 < 0.0 || c.y + o->height / 2.0 > field_height)
                throw ValidationError("object leaves the field at frame " + std::to_string(f));
        }
    }
    for (const OcclusionEpisode& e : episodes) {
        if (e.distractor < 0 || e.distractor >= static_cast<int>(distractors.size()))
            throw ValidationError("episode references a missing distractor");
        if (e.from < 0 || e.to < e.from || e.to >= frames)
            throw ValidationError("episode window must satisfy 0 <= from <= to < frames");
    }
}

Simulation simulate(const ScenarioSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Simulation sim;
    sim.frames.reserve(spec.frames);
    sim.truth.reserve(spec.frames);

    for (int f = 0; f < spec.frames; ++f) {
        Frame frame = Frame::filled(spec.field_width, spec.field_height, spec.background);
        const Point2 target_pos = spec.target.motion.position_at(spec.target.start, f);

        std::vector<bool> above(spec.distractors.size(), false);
        for (const OcclusionEpisode& e : spec.episodes) {
            if (f >= e.from && f <= e.to) above[e.distractor] = true;
        }

        for (size_t d = 0; d < spec.distractors.size(); ++d) {
            if (!above[d])
                composite(frame, spec.distractors[d],
                          spec.distractors[d].motion.position_at(spec.distractors[d].start, f));
        }
        composite(frame, spec.target, target_pos);
        for (size_t d = 0; d < spec.distractors.size(); ++d) {
            if (above[d])
                composite(frame, spec.distractors[d],
                          spec.distractors[d].motion.position_at(spec.distractors[d].start, f));
        }

        if (spec.noise > 0.0) {
            for (double& v : frame.pixels) v = std::clamp(v + gauss(rng) * spec.noise, 0.0, 1.0);
        }
        for (double& v : frame.pixels) v = std::lround(v * 255.0) / 255.0;

        // Truth flag: fraction of the target's own pixels covered by an
        // above-target distractor exceeds one half.
        int target_pixels = 0;
        int covered_pixels = 0;
        const IntRect tb = object_bounds(spec.target, target_pos, spec.field_width, spec.field_height);
        for (int r = tb.y0; r < tb.y0 + tb.h; ++r) {
            for (int c = tb.x0; c < tb.x0 + tb.w; ++c) {
                if (object_alpha(spec.target, target_pos, r, c) < 0.5) continue;
                ++target_pixels;
                for (size_t d = 0; d < spec.distractors.size(); ++d) {
                    if (!above[d]) continue;
                    const Point2 dp =
                        spec.distractors[d].motion.position_at(spec.distractors[d].start, f);
                    if (object_alpha(spec.distractors[d], dp, r, c) >= 0.5) {
                        ++covered_pixels;
                        break;
                    }
                }
            }
        }
        const bool occluded = target_pixels > 0 && covered_pixels * 2 > target_pixels;

        sim.frames.push_back(std::move(frame));
        sim.truth.push_back(
            {f, {target_pos.x, target_pos.y, spec.target.width, spec.target.height}, occluded});
    }
    return sim;
}

ScenarioSpec scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario JSON parse error: ") + e.what());
    }
    try {
        ScenarioSpec spec;
        spec.name = j.value("name", "scenario");
        if (j.contains("field")) {
            const json& f = j.at("field");
            if (!f.is_array() || f.size() != 2)
                throw ValidationError("field must be a [width, height] array");
            spec.field_width = f[0].get<int>();
            spec.field_height = f[1].get<int>();
        }
        spec.frames = j.value("frames", 60);
        spec.seed = j.value("seed", static_cast<uint64_t>(1));
        spec.background = j.value("background", 0.15);
        spec.noise = j.value("noise", 0.0);
        spec.target = object_from_json(j.at("target"));
        if (j.contains("distractors")) {
            for (const json& d : j.at("distractors")) spec.distractors.push_back(object_from_json(d));
        }
        if (j.contains("episodes")) {
            for (const json& e : j.at("episodes"))
                spec.episodes.push_back({e.at("distractor").get<int>(), e.at("from").get<int>(),
                                         e.at("to").get<int>()});
        }
        spec.validate();
        return spec;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario JSON field error: ") + e.what());
    }
}

std::string scenario_to_json(const ScenarioSpec& spec) {
    json j;
    j["name"] = spec.name;
    j["field"] = json::array({spec.field_width, spec.field_height});
    j["frames"] = spec.frames;
    j["seed"] = spec.seed;
    j["background"] = spec.background;
    j["noise"] = spec.noise;
    j["target"] = object_to_json(spec.target);
    j["distractors"] = json::array();
    for (const ObjectSpec& d : spec.distractors) j["distractors"].push_back(object_to_json(d));
    j["episodes"] = json::array();
    for (const OcclusionEpisode& e : spec.episodes)
        j["episodes"].push_back({{"distractor", e.distractor}, {"from", e.from}, {"to", e.to}});
    return j.dump(2);
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

void save_scenario(const std::string& path, const ScenarioSpec& spec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << scenario_to_json(spec) << '\n';
}

void write_truth_csv(std::ostream& out, const std::vector<TruthRow>& rows) {
    out << "frame,cx,cy,w,h,occluded\n";
    for (const TruthRow& r : rows) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%ld,%.6f,%.6f,%.6f,%.6f,%d\n", r.frame, r.box.cx, r.box.cy,
                      r.box.w, r.box.h, r.occluded ? 1 : 0);
        out << buf;
    }
    if (!out) throw std::runtime_error("failed to write truth CSV");
}

std::vector<TruthRow> read_truth_csv(std::istream& in) {
    std::vector<TruthRow> rows;
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
        TruthRow r;
        int occ = 0;
        if (std::sscanf(line.c_str(), "%ld,%lf,%lf,%lf,%lf,%d", &r.frame, &r.box.cx, &r.box.cy,
                        &r.box.w, &r.box.h, &occ) != 6)
            throw std::invalid_argument("bad truth CSV row at line " + std::to_string(lineno));
        r.occluded = occ != 0;
        rows.push_back(r);
    }
    return rows;
}

std::vector<TruthRow> load_truth_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_truth_csv(in);
}

void save_truth_csv(const std::string& path, const std::vector<TruthRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_truth_csv(out, rows);
}

}  // namespace occtrack
