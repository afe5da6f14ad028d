#pragma once

// Directed-rounding MPFR intervals; internal to the core library.

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <vector>

namespace etlab::detail {

class Interval {
  public:
    explicit Interval(mpfr_prec_t precision);
    ~Interval();
    Interval(const Interval& other);
    Interval& operator=(const Interval& other);

    mpfr_prec_t precision() const noexcept { return precision_; }

    void set_zero();
    void set_sqrt(std::uint64_t n);
    void set_endpoints(const mpfr_t lo, const mpfr_t hi);
    void add(const Interval& other);
    void sub(const Interval& other);

    bool contains_zero() const;
    bool positive() const { return mpfr_sgn(lo_) > 0; }
    bool negative() const { return mpfr_sgn(hi_) < 0; }
    /// Replaces the interval by |x|; requires !contains_zero().
    void make_abs();

    /// hi - lo relative to min(|lo|, |hi|); infinite if zero is enclosed.
    double relative_width() const;
    double midpoint() const;

    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }

    /// Decimal endpoints with `digits` significant digits, rounded outward.
    std::string lo_string(int digits) const;
    std::string hi_string(int digits) const;

  private:
    mpfr_prec_t precision_;
    mpfr_t lo_, hi_;
};

/// sqrt(n) enclosures for 1 <= n <= limit at one precision.
class SqrtTable {
  public:
    SqrtTable(std::uint64_t limit, mpfr_prec_t precision);
    const Interval& operator[](std::uint64_t n) const { return roots_[n]; }
    mpfr_prec_t precision() const noexcept { return precision_; }

  private:
    mpfr_prec_t precision_;
    std::vector<Interval> roots_;
};

}  // namespace etlab::detail
