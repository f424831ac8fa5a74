#include "occtrack/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace occtrack {

void Trajectory::push_back(const Point2& p, long frame) {
    points.push_back(p);
    frame_ids.push_back(frame);
}

void Trajectory::validate() const {
    if (points.size() != frame_ids.size())
        throw std::invalid_argument("trajectory points and frame ids must have equal length");
    for (const Point2& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("trajectory points must be finite");
    }
    for (size_t i = 1; i < frame_ids.size(); ++i) {
        if (frame_ids[i] <= frame_ids[i - 1])
            throw std::invalid_argument("trajectory frame ids must be strictly increasing");
    }
}

Trajectory Trajectory::slice(size_t begin, size_t count) const {
    if (begin + count > points.size()) throw std::invalid_argument("trajectory slice out of range");
    Trajectory out;
    out.points.assign(points.begin() + begin, points.begin() + begin + count);
    out.frame_ids.assign(frame_ids.begin() + begin, frame_ids.begin() + begin + count);
    return out;
}

void TrajSplit::validate() const {
    observed.validate();
    future.validate();
    if (observed.empty() || future.empty())
        throw std::invalid_argument("split needs a non-empty observed and future part");
    if (future.frame_ids.front() <= observed.frame_ids.back())
        throw std::invalid_argument("future part must start after the observed part");
}

double ade(const Trajectory& predicted, const Trajectory& truth) {
    predicted.validate();
    truth.validate();
    if (predicted.size() != truth.size() || predicted.empty())
        throw std::invalid_argument("ade needs equal-length non-empty trajectories");
    double sum = 0.0;
    for (size_t i = 0; i < predicted.size(); ++i) sum += euclidean(predicted.points[i], truth.points[i]);
    return sum / static_cast<double>(predicted.size());
}

std::vector<Trajectory> read_trajectory_csv(std::istream& in) {
    std::map<long, Trajectory> by_track;
    std::string line;
    bool first = true;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("frame_id", 0) == 0) continue;
        }
        std::istringstream row(line);
        long frame = 0;
        long track = 0;
        double x = 0.0;
        double y = 0.0;
        char c1 = 0;
        char c2 = 0;
        char c3 = 0;
        if (!(row >> frame >> c1 >> x >> c2 >> y >> c3 >> track) || c1 != ',' || c2 != ',' || c3 != ',')
            throw std::invalid_argument("bad trajectory CSV row at line " + std::to_string(lineno));
        by_track[track].push_back({x, y}, frame);
    }
    std::vector<Trajectory> out;
    out.reserve(by_track.size());
    for (auto& [track, traj] : by_track) {
        traj.validate();
        out.push_back(std::move(traj));
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<Trajectory>& tracks) {
    out << "frame_id,x,y,track_id\n";
    for (size_t t = 0; t < tracks.size(); ++t) {
        const Trajectory& traj = tracks[t];
        traj.validate();
        for (size_t i = 0; i < traj.size(); ++i) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%ld,%.6f,%.6f,%zu\n", traj.frame_ids[i],
                          traj.points[i].x, traj.points[i].y, t);
            out << buf;
        }
    }
    if (!out) throw std::runtime_error("failed to write trajectory CSV");
}

std::vector<Trajectory> load_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_trajectory_csv(in);
}

void save_trajectory_csv(const std::string& path, const std::vector<Trajectory>& tracks) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_trajectory_csv(out, tracks);
}

}  // namespace occtrack
