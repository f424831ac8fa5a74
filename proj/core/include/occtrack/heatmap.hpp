#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace occtrack {

/// Square response surface produced by correlating one feature level of the
/// appearance model over the search region. Scores are row-major.
class ResponseMap {
public:
    ResponseMap(int size, int level);
    ResponseMap(int size, int level, std::vector<double> values);

    int size() const { return size_; }
    int level() const { return level_; }
    double at(int row, int col) const { return values_[static_cast<size_t>(row) * size_ + col]; }
    double& at(int row, int col) { return values_[static_cast<size_t>(row) * size_ + col]; }
    const std::vector<double>& values() const { return values_; }

private:
    int size_;
    int level_;
    std::vector<double> values_;
};

struct Peak {
    int row = 0;
    int col = 0;
    double score = 0.0;
};

/// Peaks surviving low-score rejection and neighborhood suppression, in
/// descending score order. The first peak is the tracked target; the rest are
/// interference responses.
struct PeakSet {
    std::vector<Peak> peaks;
    int source_level = 1;
};

/// Candidates below this fraction of the top score are rejected.
inline constexpr double kLowPeakRatio = 0.75;
/// Chebyshev radius within which two peaks belong to the same response lobe.
inline constexpr int kNeighborRadius = 2;
inline constexpr int kDefaultTopK = 4;

/// Top k cells by score, descending. Ties break toward the smaller row-major
/// index so the result is unique.
std::vector<Peak> get_top(const ResponseMap& map, int k);

/// Keeps peaks strictly above kLowPeakRatio times the first (highest) score.
/// Input must already be sorted descending.
std::vector<Peak> remove_low_points(const std::vector<Peak>& peaks);

/// True when the two peaks lie within kNeighborRadius of each other in both
/// row and column.
bool is_neighbor(const Peak& a, const Peak& b);

/// Greedy suppression in score order: a peak survives only if it neighbors no
/// previously kept peak.
PeakSet merge_neighbors(const std::vector<Peak>& peaks, int source_level = 1);

/// Euclidean distances from the top peak to every other kept peak, in peak
/// order. Fewer than two peaks means no interferer: empty result.
std::vector<double> compute_distances(const PeakSet& set);

/// Full pipeline: get_top, remove_low_points, merge_neighbors.
PeakSet extract_peaks(const ResponseMap& map, int k = kDefaultTopK);

/// Text format: first line "size level", then size rows of size scores.
void write_response_map(std::ostream& out, const ResponseMap& map);
ResponseMap read_response_map(std::istream& in);
void save_response_map(const std::string& path, const ResponseMap& map);
ResponseMap load_response_map(const std::string& path);

}  // namespace occtrack
