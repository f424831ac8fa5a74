#pragma once

namespace occtrack {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned box in pixel coordinates, center + extent.
struct BoundingBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    Point2 center() const { return {cx, cy}; }
    double left() const { return cx - w / 2.0; }
    double right() const { return cx + w / 2.0; }
    double top() const { return cy - h / 2.0; }
    double bottom() const { return cy + h / 2.0; }
    double area() const { return w * h; }
};

/// Intersection-over-union of two boxes; 0 when disjoint or degenerate.
double iou(const BoundingBox& a, const BoundingBox& b);

double euclidean(const Point2& a, const Point2& b);

}  // namespace occtrack
