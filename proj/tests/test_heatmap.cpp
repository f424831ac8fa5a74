#include "occtrack/heatmap.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "testutil.hpp"

using namespace occtrack;

namespace {

ResponseMap map_with(int n, std::vector<std::pair<int, double>> cells) {
    std::vector<double> v(static_cast<size_t>(n) * n, 0.0);
    for (const auto& [flat, score] : cells) v[flat] = score;
    return ResponseMap(n, 1, std::move(v));
}

TEST(GetTop, DecodesFlatIndexToRowCol) {
    const ResponseMap map = map_with(5, {{7, 0.9}});
    const std::vector<Peak> top = get_top(map, 1);
    ASSERT_EQ(top.size(), 1u);
    EXPECT_EQ(top[0].row, 1);
    EXPECT_EQ(top[0].col, 2);
    EXPECT_DOUBLE_EQ(top[0].score, 0.9);
}

TEST(GetTop, OrdersByScoreThenFlatIndex) {
    const ResponseMap map = map_with(4, {{5, 0.8}, {2, 0.8}, {10, 0.9}});
    const std::vector<Peak> top = get_top(map, 3);
    ASSERT_EQ(top.size(), 3u);
    EXPECT_EQ(top[0].row * 4 + top[0].col, 10);
    EXPECT_EQ(top[1].row * 4 + top[1].col, 2);
    EXPECT_EQ(top[2].row * 4 + top[2].col, 5);
}

TEST(GetTop, RejectsOutOfRangeK) {
    const ResponseMap map(3, 1);
    EXPECT_THROW(get_top(map, 0), std::invalid_argument);
    EXPECT_THROW(get_top(map, 10), std::invalid_argument);
    EXPECT_NO_THROW(get_top(map, 9));
}

TEST(RemoveLowPoints, KeepsStrictlyAboveThreeQuartersOfTop) {
    std::vector<Peak> peaks{{0, 0, 1.0}, {0, 5, 0.8}, {5, 0, 0.76}, {5, 5, 0.7}};
    const std::vector<Peak> kept = remove_low_points(peaks);
    ASSERT_EQ(kept.size(), 3u);
    EXPECT_DOUBLE_EQ(kept[2].score, 0.76);
}

TEST(RemoveLowPoints, BoundaryIsExcluded) {
    const std::vector<Peak> kept = remove_low_points({{0, 0, 1.0}, {0, 5, 0.75}});
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_DOUBLE_EQ(kept[0].score, 1.0);
}

TEST(RemoveLowPoints, RejectsUnsortedInput) {
    EXPECT_THROW(remove_low_points({{0, 0, 0.5}, {0, 1, 0.9}}), std::invalid_argument);
}

TEST(IsNeighbor, UsesChebyshevRadiusTwo) {
    EXPECT_TRUE(is_neighbor({3, 3, 1.0}, {5, 5, 0.9}));
    EXPECT_FALSE(is_neighbor({3, 3, 1.0}, {6, 3, 0.9}));
    EXPECT_TRUE(is_neighbor({3, 3, 1.0}, {3, 3, 0.9}));
    EXPECT_FALSE(is_neighbor({0, 0, 1.0}, {0, 3, 0.9}));
}

TEST(MergeNeighbors, GreedyKeepsHighestOfEachLobe) {
    // Second and third belong to the first peak's lobe, fourth stands alone.
    const std::vector<Peak> peaks{{8, 8, 1.0}, {9, 9, 0.95}, {7, 8, 0.9}, {2, 2, 0.85}};
    const PeakSet merged = merge_neighbors(peaks, 2);
    ASSERT_EQ(merged.peaks.size(), 2u);
    EXPECT_EQ(merged.peaks[0].row, 8);
    EXPECT_EQ(merged.peaks[1].row, 2);
    EXPECT_EQ(merged.source_level, 2);
}

TEST(MergeNeighbors, ChainsDoNotBridge) {
    // (0,4) neighbors (0,2) which neighbors (0,0); (0,2) is suppressed by
    // (0,0), and (0,4) only needs to clear the kept (0,0), which it does not
    // reach. Greedy therefore keeps (0,0) and (0,4).
    const std::vector<Peak> peaks{{0, 0, 1.0}, {0, 2, 0.9}, {0, 4, 0.8}};
    const PeakSet merged = merge_neighbors(peaks, 1);
    ASSERT_EQ(merged.peaks.size(), 2u);
    EXPECT_EQ(merged.peaks[1].col, 4);
}

TEST(ComputeDistances, EuclideanFromTopPeak) {
    PeakSet set;
    set.peaks = {{0, 0, 1.0}, {3, 4, 0.9}};
    const std::vector<double> d = compute_distances(set);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_DOUBLE_EQ(d[0], 5.0);
}

TEST(ComputeDistances, OneEntryPerExtraPeak) {
    PeakSet set;
    set.peaks = {{0, 0, 1.0}, {3, 4, 0.9}, {6, 8, 0.8}};
    const std::vector<double> d = compute_distances(set);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_DOUBLE_EQ(d[0], 5.0);
    EXPECT_DOUBLE_EQ(d[1], 10.0);
}

TEST(ComputeDistances, FewerThanTwoPeaksMeansNoInterferer) {
    PeakSet lone;
    lone.peaks = {{4, 4, 1.0}};
    EXPECT_TRUE(compute_distances(lone).empty());
    EXPECT_TRUE(compute_distances(PeakSet{}).empty());
}

TEST(ExtractPeaks, TwoLobeMapYieldsTwoPeaks) {
    const ResponseMap map = map_with(10, {{11, 1.0}, {12, 0.9}, {77, 0.8}, {99, 0.1}});
    const PeakSet set = extract_peaks(map, 4);
    ASSERT_EQ(set.peaks.size(), 2u);
    EXPECT_EQ(set.peaks[0].row * 10 + set.peaks[0].col, 11);
    EXPECT_EQ(set.peaks[1].row * 10 + set.peaks[1].col, 77);
    EXPECT_EQ(set.source_level, 1);
}

TEST(ExtractPeaks, UniformPositiveMapKeepsSpacedTies) {
    const ResponseMap map(8, 1, std::vector<double>(64, 0.5));
    const PeakSet set = extract_peaks(map, 4);
    // Ties resolve to flat indices 0..3 on the first row; greedy suppression
    // leaves columns 0 and 3.
    ASSERT_EQ(set.peaks.size(), 2u);
    EXPECT_EQ(set.peaks[0].col, 0);
    EXPECT_EQ(set.peaks[1].col, 3);
}

TEST(ExtractPeaks, MatchesReferenceOnRandomMaps) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 8 + static_cast<int>(rng() % 9);
        const int k = 2 + static_cast<int>(rng() % 5);
        const ResponseMap map = testutil::random_map(n, 1, rng);
        const PeakSet got = extract_peaks(map, k);
        const std::vector<testutil::RefPeak> want = testutil::reference_peaks(map, k);
        ASSERT_EQ(got.peaks.size(), want.size()) << "trial " << trial;
        for (size_t i = 0; i < want.size(); ++i) {
            EXPECT_EQ(got.peaks[i].row, want[i].row);
            EXPECT_EQ(got.peaks[i].col, want[i].col);
            EXPECT_DOUBLE_EQ(got.peaks[i].score, want[i].score);
        }
        const std::vector<double> got_d = compute_distances(got);
        const std::vector<double> want_d = testutil::reference_distances(want);
        ASSERT_EQ(got_d.size(), want_d.size());
        for (size_t i = 0; i < want_d.size(); ++i) EXPECT_DOUBLE_EQ(got_d[i], want_d[i]);
    }
}

TEST(ResponseMapIo, TextRoundTripIsExact) {
    std::mt19937_64 rng(7);
    const ResponseMap map = testutil::random_map(9, 2, rng);
    std::stringstream buf;
    write_response_map(buf, map);
    const ResponseMap back = read_response_map(buf);
    EXPECT_EQ(back.size(), map.size());
    EXPECT_EQ(back.level(), map.level());
    EXPECT_EQ(back.values(), map.values());
}

TEST(ResponseMapIo, RejectsBadHeaderAndTruncation) {
    std::stringstream bad_header("0 1\n");
    EXPECT_THROW(read_response_map(bad_header), std::invalid_argument);
    std::stringstream truncated("3 1\n0 0 0\n0 0\n");
    EXPECT_THROW(read_response_map(truncated), std::invalid_argument);
}

TEST(ResponseMap, ValidatesShapeAndValues) {
    EXPECT_THROW(ResponseMap(0, 1), std::invalid_argument);
    EXPECT_THROW(ResponseMap(3, 4), std::invalid_argument);
    EXPECT_THROW(ResponseMap(3, 1, std::vector<double>(8, 0.0)), std::invalid_argument);
    EXPECT_THROW(ResponseMap(2, 1, {0.0, 0.0, 0.0, std::nan("")}), std::invalid_argument);
}

}  // namespace
