#include "occtrack/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "occtrack/errors.hpp"

namespace occtrack {

namespace {

IntRect box_to_rect(const BoundingBox& box) {
    IntRect r;
    r.w = std::max(1L, std::lround(box.w));
    r.h = std::max(1L, std::lround(box.h));
    r.x0 = static_cast<int>(std::lround(box.cx - box.w / 2.0));
    r.y0 = static_cast<int>(std::lround(box.cy - box.h / 2.0));
    return r;
}

void check_box(const BoundingBox& box) {
    if (!std::isfinite(box.cx) || !std::isfinite(box.cy) || !std::isfinite(box.w) ||
        !std::isfinite(box.h) || box.w <= 0.0 || box.h <= 0.0)
        throw std::invalid_argument("box must be finite with positive extent");
}

std::vector<double> resample_bilinear(const Correlation& corr, int grid) {
    std::vector<double> out(static_cast<size_t>(grid) * grid);
    const double rscale = static_cast<double>(corr.rows - 1) / (grid - 1);
    const double cscale = static_cast<double>(corr.cols - 1) / (grid - 1);
    for (int gi = 0; gi < grid; ++gi) {
        const double sr = gi * rscale;
        const int r0 = std::min(static_cast<int>(sr), corr.rows - 2);
        const double fr = sr - r0;
        for (int gj = 0; gj < grid; ++gj) {
            const double sc = gj * cscale;
            const int c0 = std::min(static_cast<int>(sc), corr.cols - 2);
            const double fc = sc - c0;
            out[static_cast<size_t>(gi) * grid + gj] =
                (1.0 - fr) * (1.0 - fc) * corr.at(r0, c0) + (1.0 - fr) * fc * corr.at(r0, c0 + 1) +
                fr * (1.0 - fc) * corr.at(r0 + 1, c0) + fr * fc * corr.at(r0 + 1, c0 + 1);
        }
    }
    return out;
}

}  // namespace

void AppearanceConfig::validate() const {
    if (grid < 2) throw std::invalid_argument("response grid must be at least 2");
    if (!(context >= 1.0) || !std::isfinite(context))
        throw std::invalid_argument("context factor must be at least 1");
    for (double s : sigmas) {
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("sigmas must be positive");
    }
}

Template crop_template(const Frame& frame, const BoundingBox& box) {
    frame.validate();
    check_box(box);
    const IntRect rect = box_to_rect(box);
    if (rect.x0 < 0 || rect.y0 < 0 || rect.x0 + rect.w > frame.width ||
        rect.y0 + rect.h > frame.height)
        throw std::invalid_argument("template box must lie inside the frame");

    IntRect ctx;
    ctx.x0 = std::max(0, rect.x0 - kTemplateMargin);
    ctx.y0 = std::max(0, rect.y0 - kTemplateMargin);
    ctx.w = std::min(frame.width, rect.x0 + rect.w + kTemplateMargin) - ctx.x0;
    ctx.h = std::min(frame.height, rect.y0 + rect.h + kTemplateMargin) - ctx.y0;

    Template t;
    t.patch = crop(frame, rect);
    t.context_patch = crop(frame, ctx);
    t.offset_row = rect.y0 - ctx.y0;
    t.offset_col = rect.x0 - ctx.x0;
    t.origin_box = box;
    return t;
}

Correlation ncc_correlate(const Frame& image, const Frame& templ) {
    image.validate();
    templ.validate();
    if (templ.width > image.width || templ.height > image.height)
        throw std::invalid_argument("template must fit inside the image");

    const int th = templ.height;
    const int tw = templ.width;
    const double n = static_cast<double>(th) * tw;
    double tsum = 0.0;
    for (double v : templ.pixels) tsum += v;
    const double tmean = tsum / n;
    std::vector<double> tc(templ.pixels.size());
    double tnorm2 = 0.0;
    for (size_t i = 0; i < tc.size(); ++i) {
        tc[i] = templ.pixels[i] - tmean;
        tnorm2 += tc[i] * tc[i];
    }
    const double tnorm = std::sqrt(tnorm2);

    Correlation corr;
    corr.rows = image.height - th + 1;
    corr.cols = image.width - tw + 1;
    corr.values.assign(static_cast<size_t>(corr.rows) * corr.cols, 0.0);
    if (tnorm < 1e-9) return corr;

    for (int oy = 0; oy < corr.rows; ++oy) {
        for (int ox = 0; ox < corr.cols; ++ox) {
            double sw = 0.0, sww = 0.0, dot = 0.0;
            for (int r = 0; r < th; ++r) {
                const double* img_row = image.pixels.data() + static_cast<size_t>(oy + r) * image.width + ox;
                const double* tc_row = tc.data() + static_cast<size_t>(r) * tw;
                for (int c = 0; c < tw; ++c) {
                    const double w = img_row[c];
                    sw += w;
                    sww += w * w;
                    dot += w * tc_row[c];
                }
            }
            const double var = std::max(0.0, sww - sw * sw / n);
            double v = 0.0;
            if (var > 1e-12) v = std::clamp(dot / (std::sqrt(var) * tnorm), -1.0, 1.0);
            corr.values[static_cast<size_t>(oy) * corr.cols + ox] = v;
        }
    }
    return corr;
}

ResponsePyramid response_pyramid(const Frame& frame, const Template& templ,
                                 const BoundingBox& search_box, const AppearanceConfig& cfg) {
    cfg.validate();
    frame.validate();
    check_box(search_box);
    templ.patch.validate();
    templ.context_patch.validate();
    if (templ.offset_row < 0 || templ.offset_col < 0 ||
        templ.offset_row + templ.patch.height > templ.context_patch.height ||
        templ.offset_col + templ.patch.width > templ.context_patch.width)
        throw std::invalid_argument("template patch must lie inside its context patch");

    const double hw = search_box.w * cfg.context / 2.0;
    const double hh = search_box.h * cfg.context / 2.0;
    IntRect region;
    region.x0 = std::max(0, static_cast<int>(std::floor(search_box.cx - hw)));
    region.y0 = std::max(0, static_cast<int>(std::floor(search_box.cy - hh)));
    const int x1 = std::min(frame.width, static_cast<int>(std::ceil(search_box.cx + hw)));
    const int y1 = std::min(frame.height, static_cast<int>(std::ceil(search_box.cy + hh)));
    region.w = x1 - region.x0;
    region.h = y1 - region.y0;

    const int th = templ.patch.height;
    const int tw = templ.patch.width;
    if (region.w < tw + 1 || region.h < th + 1)
        throw TrackingFailure("search region too small to correlate the template");

    ResponsePyramid pyr{{ResponseMap(cfg.grid, 1), ResponseMap(cfg.grid, 2), ResponseMap(cfg.grid, 3)},
                        0.5,
                        region,
                        region.h - th + 1,
                        region.w - tw + 1,
                        th,
                        tw};

    const IntRect patch_rect{templ.offset_col, templ.offset_row, tw, th};
    for (int level = 0; level < 3; ++level) {
        const double sigma = cfg.sigmas[level];
        const Frame scene = crop(gaussian_blur(frame, sigma), region);
        const Frame t_level = crop(gaussian_blur(templ.context_patch, sigma), patch_rect);
        const Correlation corr = ncc_correlate(scene, t_level);
        pyr.levels[level] = ResponseMap(cfg.grid, level + 1, resample_bilinear(corr, cfg.grid));
        if (level == 2) {
            const double peak = *std::max_element(corr.values.begin(), corr.values.end());
            pyr.score = (peak + 1.0) / 2.0;
        }
    }
    return pyr;
}

BoundingBox locate(const ResponsePyramid& pyramid, const BoundingBox& prev_box) {
    check_box(prev_box);
    if (pyramid.corr_rows < 2 || pyramid.corr_cols < 2)
        throw std::invalid_argument("pyramid geometry is degenerate");

    const ResponseMap& coarse = pyramid.levels[2];
    const int grid = coarse.size();
    int best = 0;
    const std::vector<double>& v = coarse.values();
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
        if (v[i] > v[best]) best = i;
    }
    const int gi = best / grid;
    const int gj = best % grid;
    const double rr = gi * static_cast<double>(pyramid.corr_rows - 1) / (grid - 1);
    const double cc = gj * static_cast<double>(pyramid.corr_cols - 1) / (grid - 1);
    BoundingBox out = prev_box;
    out.cy = pyramid.region.y0 + rr + (pyramid.templ_rows - 1) / 2.0;
    out.cx = pyramid.region.x0 + cc + (pyramid.templ_cols - 1) / 2.0;
    return out;
}

}  // namespace occtrack
