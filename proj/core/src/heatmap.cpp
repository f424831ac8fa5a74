#include "occtrack/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace occtrack {

namespace {

void check_shape(int size, int level, size_t count) {
    if (size <= 0) throw std::invalid_argument("response map size must be positive");
    if (level < 1 || level > 3) throw std::invalid_argument("response map level must be 1, 2 or 3");
    if (count != static_cast<size_t>(size) * size)
        throw std::invalid_argument("response map values must have size*size entries");
}

}  // namespace

ResponseMap::ResponseMap(int size, int level)
    : size_(size), level_(level), values_(static_cast<size_t>(std::max(size, 0)) * std::max(size, 0), 0.0) {
    check_shape(size, level, values_.size());
}

ResponseMap::ResponseMap(int size, int level, std::vector<double> values)
    : size_(size), level_(level), values_(std::move(values)) {
    check_shape(size, level, values_.size());
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("response map scores must be finite");
    }
}

std::vector<Peak> get_top(const ResponseMap& map, int k) {
    const int n = map.size();
    const size_t cells = static_cast<size_t>(n) * n;
    if (k < 1 || static_cast<size_t>(k) > cells)
        throw std::invalid_argument("peak count must be between 1 and size*size");

    std::vector<int> order(cells);
    std::iota(order.begin(), order.end(), 0);
    const auto& v = map.values();
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        if (v[a] != v[b]) return v[a] > v[b];
        return a < b;
    });

    std::vector<Peak> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        const int flat = order[i];
        out.push_back({flat / n, flat % n, v[flat]});
    }
    return out;
}

std::vector<Peak> remove_low_points(const std::vector<Peak>& peaks) {
    if (peaks.empty()) return {};
    for (size_t i = 1; i < peaks.size(); ++i) {
        if (peaks[i].score > peaks[i - 1].score)
            throw std::invalid_argument("peaks must be sorted by descending score");
    }
    const double cutoff = kLowPeakRatio * peaks.front().score;
    std::vector<Peak> out;
    for (const Peak& p : peaks) {
        if (p.score > cutoff) out.push_back(p);
    }
    return out;
}

bool is_neighbor(const Peak& a, const Peak& b) {
    return std::abs(a.row - b.row) <= kNeighborRadius && std::abs(a.col - b.col) <= kNeighborRadius;
}

PeakSet merge_neighbors(const std::vector<Peak>& peaks, int source_level) {
    for (size_t i = 1; i < peaks.size(); ++i) {
        if (peaks[i].score > peaks[i - 1].score)
            throw std::invalid_argument("peaks must be sorted by descending score");
    }
    PeakSet out;
    out.source_level = source_level;
    for (const Peak& p : peaks) {
        bool absorbed = false;
        for (const Peak& kept : out.peaks) {
            if (is_neighbor(p, kept)) {
                absorbed = true;
                break;
            }
        }
        if (!absorbed) out.peaks.push_back(p);
    }
    return out;
}

std::vector<double> compute_distances(const PeakSet& set) {
    if (set.peaks.size() < 2) return {};
    std::vector<double> out;
    out.reserve(set.peaks.size() - 1);
    const Peak& top = set.peaks.front();
    for (size_t i = 1; i < set.peaks.size(); ++i) {
        const double dr = set.peaks[i].row - top.row;
        const double dc = set.peaks[i].col - top.col;
        out.push_back(std::sqrt(dr * dr + dc * dc));
    }
    return out;
}

PeakSet extract_peaks(const ResponseMap& map, int k) {
    return merge_neighbors(remove_low_points(get_top(map, k)), map.level());
}

void write_response_map(std::ostream& out, const ResponseMap& map) {
    out << map.size() << ' ' << map.level() << '\n';
    out.precision(17);
    for (int r = 0; r < map.size(); ++r) {
        for (int c = 0; c < map.size(); ++c) {
            if (c) out << ' ';
            out << map.at(r, c);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed to write response map");
}

ResponseMap read_response_map(std::istream& in) {
    int size = 0;
    int level = 0;
    if (!(in >> size >> level)) throw std::invalid_argument("response map header must be 'size level'");
    if (size <= 0 || level < 1 || level > 3)
        throw std::invalid_argument("response map header out of range");
    std::vector<double> values(static_cast<size_t>(size) * size);
    for (double& v : values) {
        if (!(in >> v)) throw std::invalid_argument("response map is truncated");
    }
    return ResponseMap(size, level, std::move(values));
}

void save_response_map(const std::string& path, const ResponseMap& map) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_response_map(out, map);
}

ResponseMap load_response_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_response_map(in);
}

}  // namespace occtrack
