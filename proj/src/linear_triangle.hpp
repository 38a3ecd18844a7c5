#pragma once

// Closed-form integrals of a linear function over one triangle, given its
// vertex values. All "fraction"/"mean" helpers are normalized by the area.

#include "sandwich/geometry.hpp"

#include <array>

namespace sandwich::detail {

inline double signed_area(Point2 a, Point2 b, Point2 c) { return 0.5 * cross(b - a, c - a); }

/// Gradient of the linear interpolant of (fa, fb, fc) on triangle (a, b, c).
inline Point2 linear_gradient(Point2 a, Point2 b, Point2 c, double fa, double fb, double fc) {
    const double twice = cross(b - a, c - a);
    const Point2 ea = c - b, eb = a - c, ec = b - a;
    return {-(fa * ea.y + fb * eb.y + fc * ec.y) / twice, (fa * ea.x + fb * eb.x + fc * ec.x) / twice};
}

struct SignSplit {
    int nonneg = 0;
    double p = 0.0, q = 0.0, r = 0.0; // lone vertex first, then the other two
};

inline SignSplit split_signs(double a, double b, double c) {
    SignSplit s;
    s.nonneg = (a >= 0.0) + (b >= 0.0) + (c >= 0.0);
    if (s.nonneg == 1) {
        if (a >= 0.0) s = {1, a, b, c};
        else if (b >= 0.0) s = {1, b, a, c};
        else s = {1, c, a, b};
    } else if (s.nonneg == 2) {
        if (a < 0.0) s = {2, a, b, c};
        else if (b < 0.0) s = {2, b, a, c};
        else s = {2, c, a, b};
    }
    return s;
}

/// |{f >= 0}| / |T|.
inline double positive_fraction(double a, double b, double c) {
    const SignSplit s = split_signs(a, b, c);
    switch (s.nonneg) {
    case 3: return 1.0;
    case 0: return 0.0;
    case 1: return s.p * s.p / ((s.p - s.q) * (s.p - s.r));
    default: return 1.0 - s.p * s.p / ((s.p - s.q) * (s.p - s.r));
    }
}

/// (1/|T|) * integral of f_+.
inline double positive_mean(double a, double b, double c) {
    const SignSplit s = split_signs(a, b, c);
    switch (s.nonneg) {
    case 3: return (a + b + c) / 3.0;
    case 0: return 0.0;
    case 1: return s.p * s.p * s.p / (3.0 * (s.p - s.q) * (s.p - s.r));
    default: return (a + b + c) / 3.0 - s.p * s.p * s.p / (3.0 * (s.q - s.p) * (s.r - s.p));
    }
}

/// (1/|T|) * integral of f^2.
inline double square_mean(double a, double b, double c) {
    return (a * a + b * b + c * c + a * b + b * c + c * a) / 6.0;
}

/// (1/|T|) * integral of f_+^2.
inline double positive_square_mean(double a, double b, double c) {
    const SignSplit s = split_signs(a, b, c);
    switch (s.nonneg) {
    case 3: return square_mean(a, b, c);
    case 0: return 0.0;
    case 1: return s.p * s.p * s.p * s.p / (6.0 * (s.p - s.q) * (s.p - s.r));
    default:
        return square_mean(a, b, c) - s.p * s.p * s.p * s.p / (6.0 * (s.q - s.p) * (s.r - s.p));
    }
}

/// Segment of {f = 0} inside the triangle, when f changes sign there.
/// Endpoints are returned with the barycentric weights that produced them so
/// other linear functions can be interpolated along the segment.
struct ZeroSegment {
    bool present = false;
    Point2 e0, e1;
    std::array<double, 3> w0{}, w1{};
};

inline ZeroSegment zero_segment(const std::array<Point2, 3>& p, const std::array<double, 3>& f) {
    ZeroSegment z;
    int found = 0;
    for (int i = 0; i < 3 && found < 2; ++i) {
        const int j = (i + 1) % 3;
        const bool crosses = (f[i] >= 0.0) != (f[j] >= 0.0);
        if (!crosses) continue;
        const double t = f[i] / (f[i] - f[j]);
        std::array<double, 3> w{};
        w[static_cast<std::size_t>(i)] = 1.0 - t;
        w[static_cast<std::size_t>(j)] = t;
        const Point2 x = (1.0 - t) * p[static_cast<std::size_t>(i)] + t * p[static_cast<std::size_t>(j)];
        if (found == 0) {
            z.e0 = x;
            z.w0 = w;
        } else {
            z.e1 = x;
            z.w1 = w;
        }
        ++found;
    }
    z.present = found == 2;
    return z;
}

} // namespace sandwich::detail
