#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "occtrack/box.hpp"

namespace occtrack {

/// Ordered sequence of target center positions with their frame ids.
struct Trajectory {
    std::vector<Point2> points;
    std::vector<long> frame_ids;

    size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    void push_back(const Point2& p, long frame);
    /// Checks equal lengths, finite coordinates, strictly increasing frames.
    void validate() const;

    Trajectory slice(size_t begin, size_t count) const;
};

/// Observed prefix plus the future continuation used as training target.
struct TrajSplit {
    Trajectory observed;
    Trajectory future;

    void validate() const;
};

/// Average displacement error: mean Euclidean distance between predicted and
/// true points, index-aligned.
double ade(const Trajectory& predicted, const Trajectory& truth);

/// CSV rows "frame_id,x,y,track_id", grouped into one trajectory per track
/// id (ascending), rows within a track ordered by frame.
std::vector<Trajectory> read_trajectory_csv(std::istream& in);
void write_trajectory_csv(std::ostream& out, const std::vector<Trajectory>& tracks);
std::vector<Trajectory> load_trajectory_csv(const std::string& path);
void save_trajectory_csv(const std::string& path, const std::vector<Trajectory>& tracks);

}  // namespace occtrack
