#pragma once

#include <cmath>
#include <cstdint>

namespace etlab {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2. Relies on a correctly
// rounded fma; all operations below are the classical error-free transforms.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    double to_double() const noexcept { return hi + lo; }
};

namespace dd {

inline DoubleDouble two_sum(double a, double b) noexcept {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble quick_two_sum(double a, double b) noexcept {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) noexcept {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DoubleDouble add(DoubleDouble a, DoubleDouble b) noexcept {
    DoubleDouble s = two_sum(a.hi, b.hi);
    DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble mul(DoubleDouble a, DoubleDouble b) noexcept {
    DoubleDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble mul(DoubleDouble a, double b) noexcept {
    DoubleDouble p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble sqrt(DoubleDouble a) noexcept {
    if (a.hi <= 0.0) return {0.0, 0.0};
    const double s = std::sqrt(a.hi);
    const DoubleDouble sq = two_prod(s, s);
    const double corr = ((a.hi - sq.hi) - sq.lo + a.lo) / (2.0 * s);
    return quick_two_sum(s, corr);
}

/// Fractional part in [0, 1). The integer part of hi is removed exactly,
/// so the only rounding is the final hi+lo addition.
inline double frac(DoubleDouble a) noexcept {
    const double ih = std::floor(a.hi);
    double f = (a.hi - ih) + a.lo;
    f -= std::floor(f);
    if (f >= 1.0) f = 0.0;
    return f;
}

}  // namespace dd
}  // namespace etlab
