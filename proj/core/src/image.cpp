#include "occtrack/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace occtrack {

namespace {

// Mirror an out-of-range index back into [0, n) without repeating the edge
// sample, folding as often as needed.
int reflect(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    i = ((i % period) + period) % period;
    return i < n ? i : period - i;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

}  // namespace

Frame Frame::filled(int width, int height, double value) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("frame extent must be positive");
    Frame f;
    f.width = width;
    f.height = height;
    f.pixels.assign(static_cast<size_t>(width) * height, value);
    return f;
}

void Frame::validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("frame extent must be positive");
    if (pixels.size() != static_cast<size_t>(width) * height)
        throw std::invalid_argument("frame pixel count does not match its extent");
    for (double v : pixels) {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("frame pixels must be in [0, 1]");
    }
}

Frame crop(const Frame& frame, const IntRect& rect) {
    if (rect.w <= 0 || rect.h <= 0) throw std::invalid_argument("crop extent must be positive");
    if (rect.x0 < 0 || rect.y0 < 0 || rect.x0 + rect.w > frame.width ||
        rect.y0 + rect.h > frame.height)
        throw std::invalid_argument("crop rectangle exceeds the frame");
    Frame out = Frame::filled(rect.w, rect.h, 0.0);
    for (int r = 0; r < rect.h; ++r)
        for (int c = 0; c < rect.w; ++c) out.at(r, c) = frame.at(rect.y0 + r, rect.x0 + c);
    return out;
}

Frame gaussian_blur(const Frame& frame, double sigma) {
    if (sigma < 0.0 || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be non-negative");
    if (frame.width <= 0 || frame.height <= 0)
        throw std::invalid_argument("frame extent must be positive");
    if (sigma == 0.0) return frame;

    const std::vector<double> k = gaussian_kernel(sigma);
    const int radius = static_cast<int>(k.size() / 2);

    Frame tmp = Frame::filled(frame.width, frame.height, 0.0);
    for (int r = 0; r < frame.height; ++r) {
        for (int c = 0; c < frame.width; ++c) {
            double s = 0.0;
            for (int j = -radius; j <= radius; ++j)
                s += k[j + radius] * frame.at(r, reflect(c + j, frame.width));
            tmp.at(r, c) = s;
        }
    }
    Frame out = Frame::filled(frame.width, frame.height, 0.0);
    for (int r = 0; r < frame.height; ++r) {
        for (int c = 0; c < frame.width; ++c) {
            double s = 0.0;
            for (int j = -radius; j <= radius; ++j)
                s += k[j + radius] * tmp.at(reflect(r + j, frame.height), c);
            out.at(r, c) = std::clamp(s, 0.0, 1.0);
        }
    }
    return out;
}

void write_pgm(std::ostream& out, const Frame& frame) {
    frame.validate();
    out << "P5\n" << frame.width << ' ' << frame.height << "\n255\n";
    std::vector<unsigned char> row(frame.width);
    for (int r = 0; r < frame.height; ++r) {
        for (int c = 0; c < frame.width; ++c)
            row[c] = static_cast<unsigned char>(std::lround(frame.at(r, c) * 255.0));
        out.write(reinterpret_cast<const char*>(row.data()), frame.width);
    }
    if (!out) throw std::runtime_error("failed to write PGM");
}

Frame read_pgm(std::istream& in) {
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::invalid_argument("only binary PGM (P5) is supported");
    auto next_token = [&in]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        throw std::invalid_argument("truncated PGM header");
    };
    const int width = std::stoi(next_token());
    const int height = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (width <= 0 || height <= 0 || maxval != 255)
        throw std::invalid_argument("unsupported PGM geometry or depth");
    in.get();
    Frame f = Frame::filled(width, height, 0.0);
    std::vector<unsigned char> row(width);
    for (int r = 0; r < height; ++r) {
        in.read(reinterpret_cast<char*>(row.data()), width);
        if (!in) throw std::invalid_argument("truncated PGM pixel data");
        for (int c = 0; c < width; ++c) f.at(r, c) = row[c] / 255.0;
    }
    return f;
}

void save_pgm(const std::string& path, const Frame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_pgm(out, frame);
}

Frame load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_pgm(in);
}

}  // namespace occtrack
