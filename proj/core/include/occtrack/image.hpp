#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace occtrack {

/// Grayscale image, row-major doubles in [0, 1].
struct Frame {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    static Frame filled(int width, int height, double value);

    double at(int row, int col) const { return pixels[static_cast<size_t>(row) * width + col]; }
    double& at(int row, int col) { return pixels[static_cast<size_t>(row) * width + col]; }
    bool contains(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }
    void validate() const;
};

/// Integer pixel rectangle, origin at the top-left corner.
struct IntRect {
    int x0 = 0;
    int y0 = 0;
    int w = 0;
    int h = 0;
};

Frame crop(const Frame& frame, const IntRect& rect);

/// Separable Gaussian with reflected borders; kernel radius ceil(3 * sigma).
/// sigma 0 returns the input unchanged.
Frame gaussian_blur(const Frame& frame, double sigma);

/// Binary PGM (P5), 8-bit. Values quantize to the nearest of 256 levels on
/// write; frames rendered by the simulator are already quantized so a
/// write/read round trip is exact.
void write_pgm(std::ostream& out, const Frame& frame);
Frame read_pgm(std::istream& in);
void save_pgm(const std::string& path, const Frame& frame);
Frame load_pgm(const std::string& path);

}  // namespace occtrack
