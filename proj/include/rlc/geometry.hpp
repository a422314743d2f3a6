#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace rlc::geometry {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Distance from point p to the closed segment [a, b].
template <typename Scalar>
Scalar point_segment_distance(const Point2<Scalar>& p, const Point2<Scalar>& a, const Point2<Scalar>& b) {
    const Point2<Scalar> ab = b - a;
    const Scalar len2 = ab.squaredNorm();
    Scalar t = len2 > Scalar(0) ? (p - a).dot(ab) / len2 : Scalar(0);
    t = std::clamp(t, Scalar(0), Scalar(1));
    return (a + t * ab - p).norm();
}

/// Distance from point p to the axis-aligned rectangle with given center and
/// half extents; 0 inside.
template <typename Scalar>
Scalar point_rect_distance(const Point2<Scalar>& p, const Point2<Scalar>& center, const Point2<Scalar>& half) {
    const Point2<Scalar> d = ((p - center).cwiseAbs() - half).cwiseMax(Scalar(0));
    return d.norm();
}

template <typename Scalar>
bool point_in_rect(const Point2<Scalar>& p, const Point2<Scalar>& center, const Point2<Scalar>& half) {
    return ((p - center).cwiseAbs() - half).maxCoeff() < Scalar(0);
}

/// Open-interior test: does the segment pass through the rectangle's interior?
/// Liang-Barsky clipping against the slab pairs.
template <typename Scalar>
bool segment_intersects_rect(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& center,
                             const Point2<Scalar>& half) {
    const Point2<Scalar> lo = center - half;
    const Point2<Scalar> hi = center + half;
    const Point2<Scalar> d = b - a;
    Scalar t0 = 0, t1 = 1;
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == Scalar(0)) {
            if (a[axis] <= lo[axis] || a[axis] >= hi[axis]) return false;
            continue;
        }
        Scalar ta = (lo[axis] - a[axis]) / d[axis];
        Scalar tb = (hi[axis] - a[axis]) / d[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 >= t1) return false;
    }
    return true;
}

template <typename Scalar>
Scalar cross(const Point2<Scalar>& u, const Point2<Scalar>& v) {
    return u.x() * v.y() - u.y() * v.x();
}

/// Closed segment intersection, collinear overlap included.
template <typename Scalar>
bool segments_intersect(const Point2<Scalar>& p1, const Point2<Scalar>& p2, const Point2<Scalar>& q1,
                        const Point2<Scalar>& q2) {
    const Scalar d1 = cross<Scalar>(q2 - q1, p1 - q1);
    const Scalar d2 = cross<Scalar>(q2 - q1, p2 - q1);
    const Scalar d3 = cross<Scalar>(p2 - p1, q1 - p1);
    const Scalar d4 = cross<Scalar>(p2 - p1, q2 - p1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on_segment = [](const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& p) {
        return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
               p.y() <= std::max(a.y(), b.y());
    };
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

} // namespace rlc::geometry
