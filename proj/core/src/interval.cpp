#include "interval.hpp"

#include <cmath>
#include <limits>

namespace etlab::detail {

Interval::Interval(mpfr_prec_t precision) : precision_(precision) {
    mpfr_init2(lo_, precision);
    mpfr_init2(hi_, precision);
    set_zero();
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval::Interval(const Interval& other) : precision_(other.precision_) {
    mpfr_init2(lo_, precision_);
    mpfr_init2(hi_, precision_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval& Interval::operator=(const Interval& other) {
    if (this != &other) {
        precision_ = other.precision_;
        mpfr_set_prec(lo_, precision_);
        mpfr_set_prec(hi_, precision_);
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    return *this;
}

void Interval::set_zero() {
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

void Interval::set_sqrt(std::uint64_t n) {
    mpfr_set_ui(lo_, n, MPFR_RNDD);  // exact for n < 2^64 at >= 64 bits
    mpfr_set_ui(hi_, n, MPFR_RNDU);
    mpfr_sqrt(lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(hi_, hi_, MPFR_RNDU);
}

void Interval::set_endpoints(const mpfr_t lo, const mpfr_t hi) {
    mpfr_set(lo_, lo, MPFR_RNDD);
    mpfr_set(hi_, hi, MPFR_RNDU);
}

void Interval::add(const Interval& o) {
    mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
}

void Interval::sub(const Interval& o) {
    mpfr_sub(lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(hi_, hi_, o.lo_, MPFR_RNDU);
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

void Interval::make_abs() {
    if (negative()) {
        mpfr_swap(lo_, hi_);
        mpfr_neg(lo_, lo_, MPFR_RNDD);
        mpfr_neg(hi_, hi_, MPFR_RNDU);
    }
}

double Interval::relative_width() const {
    if (contains_zero()) return std::numeric_limits<double>::infinity();
    mpfr_t w, m;
    mpfr_init2(w, precision_);
    mpfr_init2(m, precision_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    if (positive())
        mpfr_set(m, lo_, MPFR_RNDD);
    else
        mpfr_neg(m, hi_, MPFR_RNDD);
    mpfr_div(w, w, m, MPFR_RNDU);
    const double r = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    mpfr_clear(m);
    return r;
}

double Interval::midpoint() const {
    return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

namespace {

std::string format(const mpfr_t x, int digits, bool up) {
    char* buf = nullptr;
    if (up)
        mpfr_asprintf(&buf, "%.*RUe", digits - 1, x);
    else
        mpfr_asprintf(&buf, "%.*RDe", digits - 1, x);
    std::string s(buf ? buf : "");
    mpfr_free_str(buf);
    return s;
}

}  // namespace

std::string Interval::lo_string(int digits) const { return format(lo_, digits, false); }
std::string Interval::hi_string(int digits) const { return format(hi_, digits, true); }

SqrtTable::SqrtTable(std::uint64_t limit, mpfr_prec_t precision) : precision_(precision) {
    roots_.reserve(limit + 1);
    for (std::uint64_t n = 0; n <= limit; ++n) {
        roots_.emplace_back(precision);
        roots_.back().set_sqrt(n);
    }
}

}  // namespace etlab::detail
