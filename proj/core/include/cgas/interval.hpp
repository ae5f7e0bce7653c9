#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "cgas/errors.hpp"

namespace cgas {

// Small closed-interval arithmetic with outward rounding. Endpoints are
// evaluated in round-to-nearest and then nudged outward a few ulps, which
// covers libm's error bounds for the functions used here. Widening any input
// interval can only widen the result.
struct Interval {
    double lo = 0;
    double hi = 0;

    Interval() = default;
    Interval(double l, double h) : lo(l), hi(h) {
        if (!(l <= h)) throw invalid_parameter("interval: lo > hi");
    }
    static Interval point(double v) { return Interval(v, v); }

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double v) const { return lo <= v && v <= hi; }
};

namespace detail {
inline double down(double v, int ulps = 2) {
    for (int i = 0; i < ulps; ++i) v = std::nextafter(v, -std::numeric_limits<double>::infinity());
    return v;
}
inline double up(double v, int ulps = 2) {
    for (int i = 0; i < ulps; ++i) v = std::nextafter(v, std::numeric_limits<double>::infinity());
    return v;
}
inline Interval widen(double lo, double hi, int ulps = 2) {
    return Interval(down(lo, ulps), up(hi, ulps));
}
}  // namespace detail

inline Interval operator+(Interval a, Interval b) { return detail::widen(a.lo + b.lo, a.hi + b.hi); }
inline Interval operator-(Interval a, Interval b) { return detail::widen(a.lo - b.hi, a.hi - b.lo); }
inline Interval operator-(double a, Interval b) { return Interval::point(a) - b; }
inline Interval operator+(double a, Interval b) { return Interval::point(a) + b; }

inline Interval operator*(Interval a, Interval b) {
    double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return detail::widen(std::min(std::min(p1, p2), std::min(p3, p4)),
                         std::max(std::max(p1, p2), std::max(p3, p4)));
}
inline Interval operator*(double a, Interval b) { return Interval::point(a) * b; }
inline Interval operator*(Interval a, double b) { return a * Interval::point(b); }

inline Interval operator/(Interval a, Interval b) {
    if (b.lo <= 0 && b.hi >= 0)
        throw invalid_parameter("interval division by interval containing zero");
    double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    return detail::widen(std::min(std::min(p1, p2), std::min(p3, p4)),
                         std::max(std::max(p1, p2), std::max(p3, p4)));
}
inline Interval operator/(double a, Interval b) { return Interval::point(a) / b; }
inline Interval operator/(Interval a, double b) { return a / Interval::point(b); }

inline Interval iexp(Interval a) { return detail::widen(std::exp(a.lo), std::exp(a.hi), 4); }

// Integer power of a nonnegative interval.
inline Interval ipow(Interval a, int n) {
    if (a.lo < 0) throw invalid_parameter("ipow: negative base");
    return detail::widen(std::pow(a.lo, n), std::pow(a.hi, n), 4);
}

inline Interval isqr(Interval a) {
    if (a.lo < 0) throw invalid_parameter("isqr: negative base");
    return detail::widen(a.lo * a.lo, a.hi * a.hi);
}

inline std::string to_string(Interval a) {
    return "[" + std::to_string(a.lo) + ", " + std::to_string(a.hi) + "]";
}

}  // namespace cgas
