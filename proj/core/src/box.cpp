#include "occtrack/box.hpp"

#include <algorithm>
#include <cmath>

namespace occtrack {

double iou(const BoundingBox& a, const BoundingBox& b) {
    if (a.w <= 0.0 || a.h <= 0.0 || b.w <= 0.0 || b.h <= 0.0) return 0.0;
    const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.left(), b.left()));
    const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top()));
    const double inter = ix * iy;
    if (inter <= 0.0) return 0.0;
    return inter / (a.area() + b.area() - inter);
}

double euclidean(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace occtrack
