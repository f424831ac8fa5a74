#pragma once

#include <array>

#include "occtrack/box.hpp"
#include "occtrack/heatmap.hpp"
#include "occtrack/image.hpp"

namespace occtrack {

struct AppearanceConfig {
    /// Side of the square response grid each level is resampled to.
    int grid = 17;
    /// Search region extent as a multiple of the target box.
    double context = 2.0;
    /// Blur scales for the three correlation levels, fine to coarse.
    std::array<double, 3> sigmas{1.0, 2.0, 4.0};

    void validate() const;
};

/// Extra pixels kept around the template patch so per-level blurs see the
/// patch's true surroundings instead of a synthetic border.
inline constexpr int kTemplateMargin = 12;

/// Target appearance cropped from the first frame. context_patch extends the
/// exact patch by up to kTemplateMargin on each side (clamped at the frame
/// edge); offset locates the patch inside it.
struct Template {
    Frame patch;
    Frame context_patch;
    int offset_row = 0;
    int offset_col = 0;
    BoundingBox origin_box;
};

Template crop_template(const Frame& frame, const BoundingBox& box);

/// Valid-mode normalized cross correlation of the template over the image.
/// Scores lie in [-1, 1]; windows or templates with zero variance score 0.
struct Correlation {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
};

Correlation ncc_correlate(const Frame& image, const Frame& templ);

/// Three response maps from correlating the template against the search
/// region at each blur level, each resampled to grid x grid, plus the
/// geometry needed to map grid cells back to frame coordinates.
struct ResponsePyramid {
    std::array<ResponseMap, 3> levels;
    /// (max coarse-level correlation + 1) / 2, in [0, 1].
    double score = 0.5;
    IntRect region;
    int corr_rows = 0;
    int corr_cols = 0;
    int templ_rows = 0;
    int templ_cols = 0;
};

/// search_box is scaled by cfg.context and clamped to the frame. Throws
/// TrackingFailure when the clamped region is too small to correlate.
ResponsePyramid response_pyramid(const Frame& frame, const Template& templ,
                                 const BoundingBox& search_box,
                                 const AppearanceConfig& cfg = {});

/// Maps the argmax cell of the coarse-level map back to frame coordinates,
/// keeping the previous box extent.
BoundingBox locate(const ResponsePyramid& pyramid, const BoundingBox& prev_box);

}  // namespace occtrack
