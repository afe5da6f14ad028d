#include "etlab/independence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "etlab/arith.hpp"
#include "etlab/error.hpp"
#include "etlab/parallel.hpp"
#include "etlab/rng.hpp"
#include "interval.hpp"

namespace etlab {

void SignedRadicalSum::validate() const {
    if (terms.empty()) raise(ErrorKind::invalid_argument, "signed radical sum: no terms");
    for (const auto& t : terms) {
        if (t.sign != 1 && t.sign != -1) raise(ErrorKind::invalid_argument, "signed radical sum: sign must be +1 or -1");
        if (t.n < 1 || t.n > bound)
            raise(ErrorKind::invalid_argument, "signed radical sum: term " + std::to_string(t.n) + " outside [1, M]");
    }
}

RelationResult detect_relation(std::span<const SignedTerm> terms) {
    RelationResult r;
    for (const auto& t : terms) {
        if (t.n == 0) raise(ErrorKind::invalid_argument, "detect_relation: n must be >= 1");
        const auto d = squarefree_decompose(t.n);
        r.kernel_sums[d.kernel] += t.sign * static_cast<std::int64_t>(d.cofactor);
    }
    r.is_zero = std::all_of(r.kernel_sums.begin(), r.kernel_sums.end(), [](const auto& kv) { return kv.second == 0; });
    return r;
}

RelationResult detect_relation(const SignedRadicalSum& sum) {
    sum.validate();
    return detect_relation(std::span<const SignedTerm>(sum.terms));
}

HrBound hr_lower_bound(unsigned m, std::uint64_t M) {
    if (m < 1 || M < 1) raise(ErrorKind::invalid_argument, "hr_lower_bound: need m >= 1 and M >= 1");
    HrBound b;
    b.m = m;
    b.M = M;
    const long double exponent = std::ldexp(1.0L, static_cast<int>(m) - 1) - 1.0L;
    const long double base = std::log(static_cast<long double>(m)) + 0.5L * std::log(static_cast<long double>(M));
    const long double log_value = -exponent * base;
    b.log_value = static_cast<double>(log_value);
    if (log_value < std::log(std::numeric_limits<long double>::min())) {
        b.underflow = true;
        b.value = 0.0L;
    } else {
        b.value = std::exp(log_value);
    }
    return b;
}

namespace {

using detail::Interval;
using detail::SqrtTable;

Interval enclose(std::span<const SignedTerm> terms, mpfr_prec_t prec) {
    Interval acc(prec), root(prec);
    for (const auto& t : terms) {
        root.set_sqrt(t.n);
        if (t.sign > 0)
            acc.add(root);
        else
            acc.sub(root);
    }
    return acc;
}

CertifiedValue describe(const Interval& iv) {
    CertifiedValue c;
    c.lower = iv.lo_string(25);
    c.upper = iv.hi_string(25);
    c.precision_bits = static_cast<unsigned>(iv.precision());
    c.approx = iv.midpoint();
    return c;
}

/// |sum| enclosed away from zero (and to `digits` digits when > 0).
Interval certify_interval(std::span<const SignedTerm> terms, unsigned digits) {
    const double target = digits > 0 ? 0.5 * std::pow(10.0, -static_cast<double>(digits)) : 0.0;
    for (mpfr_prec_t prec = certify_start_bits; prec <= certify_max_bits; prec *= 2) {
        Interval iv = enclose(terms, prec);
        if (iv.contains_zero()) continue;
        iv.make_abs();
        if (digits == 0 || iv.relative_width() <= target) return iv;
    }
    raise(ErrorKind::precision, "certify: enclosure still not tight enough at 4096 bits");
}

/// Upper enclosure of (m sqrt M)^{-(2^{m-1}-1)} at the given precision.
struct BoundCache {
    unsigned m;
    std::uint64_t M;
    std::vector<std::pair<mpfr_prec_t, std::unique_ptr<Interval>>> levels;

    const Interval& at(mpfr_prec_t prec) {
        for (auto& [p, iv] : levels)
            if (p == prec) return *iv;
        auto iv = std::make_unique<Interval>(prec);
        mpfr_t base, lo, hi;
        mpfr_inits2(prec, base, lo, hi, static_cast<mpfr_ptr>(nullptr));
        const long e = (1L << (m - 1)) - 1;
        // smaller base -> larger value
        mpfr_sqrt_ui(base, M, MPFR_RNDD);
        mpfr_mul_ui(base, base, m, MPFR_RNDD);
        mpfr_pow_si(hi, base, -e, MPFR_RNDU);
        mpfr_sqrt_ui(base, M, MPFR_RNDU);
        mpfr_mul_ui(base, base, m, MPFR_RNDU);
        mpfr_pow_si(lo, base, -e, MPFR_RNDD);
        iv->set_endpoints(lo, hi);
        mpfr_clears(base, lo, hi, static_cast<mpfr_ptr>(nullptr));
        levels.emplace_back(prec, std::move(iv));
        return *levels.back().second;
    }
};

double binomial(std::uint64_t n, std::uint64_t k) {
    double b = 1.0;
    for (std::uint64_t i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
    return b;
}

/// Shared per-(M, m) data: signed items k in [0, 2M), item k is
/// (+1, k+1) for k < M and (-1, k-M+1) otherwise.
struct Items {
    std::uint64_t M;
    unsigned m;
    std::vector<std::uint64_t> kernel, cofactor;
    std::vector<double> root;

    Items(std::uint64_t M_, unsigned m_) : M(M_), m(m_), kernel(M_ + 1), cofactor(M_ + 1), root(M_ + 1) {
        for (std::uint64_t n = 1; n <= M; ++n) {
            const auto d = squarefree_decompose(n);
            kernel[n] = d.kernel;
            cofactor[n] = d.cofactor;
            root[n] = std::sqrt(static_cast<double>(n));
        }
    }

    SignedTerm term(std::uint64_t k) const {
        return k < M ? SignedTerm{1, k + 1} : SignedTerm{-1, k - M + 1};
    }

    /// Absolute error of a double evaluation; generous.
    double eval_error() const { return m * std::sqrt(static_cast<double>(M)) * 0x1.0p-50; }

    bool is_zero(const std::uint64_t* idx) const {
        std::uint64_t ks[64];
        std::int64_t sums[64];
        unsigned used = 0;
        for (unsigned j = 0; j < m; ++j) {
            const auto t = term(idx[j]);
            const std::uint64_t k = kernel[t.n];
            unsigned s = 0;
            while (s < used && ks[s] != k) ++s;
            if (s == used) {
                ks[used] = k;
                sums[used++] = 0;
            }
            sums[s] += t.sign * static_cast<std::int64_t>(cofactor[t.n]);
        }
        for (unsigned s = 0; s < used; ++s)
            if (sums[s] != 0) return false;
        return true;
    }

    double value(const std::uint64_t* idx) const {
        double v = 0.0;
        for (unsigned j = 0; j < m; ++j) {
            const auto t = term(idx[j]);
            v += t.sign * root[t.n];
        }
        return v;
    }

    std::vector<SignedTerm> tuple(const std::uint64_t* idx) const {
        std::vector<SignedTerm> t;
        for (unsigned j = 0; j < m; ++j) t.push_back(term(idx[j]));
        return t;
    }
};

/// Running record of the smallest |value| plus every tuple that could still
/// be the true minimum once rounding is accounted for.
struct Record {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, std::vector<SignedTerm>>> candidates;

    void offer(double a, double slack, const Items& items, const std::uint64_t* idx) {
        if (a > best + 2 * slack) return;
        if (a < best) best = a;
        candidates.emplace_back(a, items.tuple(idx));
        if (candidates.size() > 4096) prune(slack);
    }

    void prune(double slack) {
        std::erase_if(candidates, [&](const auto& c) { return c.first > best + 2 * slack; });
    }

    void merge(Record&& o) {
        best = std::min(best, o.best);
        for (auto& c : o.candidates) candidates.push_back(std::move(c));
    }
};

/// The certified minimum among the candidates, by lower endpoint; ties keep
/// enumeration order.
std::pair<std::vector<SignedTerm>, CertifiedValue> settle(Record& rec, double slack, unsigned digits) {
    rec.prune(slack);
    if (rec.candidates.empty()) raise(ErrorKind::degenerate_input, "no nonzero sums in the enumeration");
    std::unique_ptr<Interval> best;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < rec.candidates.size(); ++i) {
        Interval iv = certify_interval(rec.candidates[i].second, digits);
        if (!best) {
            best = std::make_unique<Interval>(iv);
            best_i = i;
            continue;
        }
        // compare at the common (larger) precision
        if (mpfr_cmp(iv.lo(), best->lo()) < 0) {
            *best = iv;
            best_i = i;
        }
    }
    return {rec.candidates[best_i].second, describe(*best)};
}

/// Calls f(idx) for every non-decreasing index tuple with idx[0] in [first_lo, first_hi).
template <class F>
void for_each_multiset(std::uint64_t items, unsigned m, std::uint64_t first_lo, std::uint64_t first_hi, F&& f) {
    std::vector<std::uint64_t> idx(m);
    for (std::uint64_t a = first_lo; a < first_hi; ++a) {
        idx[0] = a;
        for (unsigned j = 1; j < m; ++j) idx[j] = a;
        while (true) {
            f(idx.data());
            // advance positions 1..m-1
            int j = static_cast<int>(m) - 1;
            while (j >= 1 && idx[j] + 1 >= items) --j;
            if (j < 1) break;
            ++idx[j];
            for (unsigned k = j + 1; k < m; ++k) idx[k] = idx[j];
        }
    }
}

}  // namespace

CertifiedValue certify_abs(std::span<const SignedTerm> terms, unsigned digits) {
    if (terms.empty()) raise(ErrorKind::invalid_argument, "certify: no terms");
    if (detect_relation(terms).is_zero) raise(ErrorKind::invalid_argument, "certify: the sum is exactly zero");
    const Interval iv = certify_interval(terms, digits);
    return describe(iv);
}

VerifyResult exhaustive_verify(std::uint64_t M, unsigned m, const VerifyOptions& options) {
    if (M < 1 || m < 1) raise(ErrorKind::invalid_argument, "exhaustive_verify: need M >= 1 and m >= 1");
    if (m > 62) raise(ErrorKind::overflow, "exhaustive_verify: m too large");
    const double space = std::pow(2.0 * static_cast<double>(M), static_cast<double>(m));
    if (space > options.enumeration_cap)
        raise(ErrorKind::resource, "exhaustive_verify: (2M)^m = " + std::to_string(space) + " exceeds the cap " +
                                       std::to_string(options.enumeration_cap));
    const Items items(M, m);
    const double slack = items.eval_error();
    const std::uint64_t n_items = 2 * M;

    struct Partial {
        Record record;
        std::uint64_t sums = 0, zeros = 0, refined = 0;
        bool violated = false;
    };
    std::vector<Partial> partials(n_items);

    const SqrtTable roots(M, certify_start_bits);
    parallel_chunks(n_items, options.workers, [&](std::size_t begin, std::size_t end) {
        BoundCache bounds{m, M, {}};
        const Interval& bound64 = bounds.at(certify_start_bits);
        Interval acc(certify_start_bits);
        for (std::size_t a = begin; a < end; ++a) {
            Partial& p = partials[a];
            for_each_multiset(n_items, m, a, a + 1, [&](const std::uint64_t* idx) {
                ++p.sums;
                if (items.is_zero(idx)) {
                    ++p.zeros;
                    return;
                }
                acc.set_zero();
                for (unsigned j = 0; j < m; ++j) {
                    const auto t = items.term(idx[j]);
                    if (t.sign > 0)
                        acc.add(roots[t.n]);
                    else
                        acc.sub(roots[t.n]);
                }
                bool cleared = false;
                if (!acc.contains_zero()) {
                    acc.make_abs();
                    cleared = mpfr_cmp(acc.lo(), bound64.hi()) >= 0;
                }
                if (!cleared) {
                    // higher precision, up to the ceiling
                    ++p.refined;
                    const auto tuple = items.tuple(idx);
                    bool decided = false;
                    for (mpfr_prec_t prec = 2 * certify_start_bits; prec <= certify_max_bits && !decided; prec *= 2) {
                        Interval iv = enclose(tuple, prec);
                        if (iv.contains_zero()) continue;
                        iv.make_abs();
                        const Interval& b = bounds.at(prec);
                        if (mpfr_cmp(iv.lo(), b.hi()) >= 0) {
                            decided = true;
                        } else if (mpfr_cmp(iv.hi(), b.lo()) < 0) {
                            p.violated = true;
                            decided = true;
                        }
                    }
                    if (!decided) raise(ErrorKind::precision, "exhaustive_verify: could not separate a sum from the bound at 4096 bits");
                }
                p.record.offer(std::abs(items.value(idx)), slack, items, idx);
            });
        }
    });

    VerifyResult result;
    result.M = M;
    result.m = m;
    result.bound = hr_lower_bound(m, M);
    Record all;
    bool violated = false;
    for (auto& p : partials) {
        result.sums_enumerated += p.sums;
        result.exact_zeros += p.zeros;
        result.refined += p.refined;
        violated |= p.violated;
        all.merge(std::move(p.record));
    }
    auto [tuple, value] = settle(all, slack, options.certified_digits);
    result.argmin = std::move(tuple);
    result.min_nonzero = std::move(value);
    BoundCache bounds{m, M, {}};
    result.bound_upper = bounds.at(certify_start_bits).hi_string(25);
    result.holds = !violated;
    return result;
}

SearchResult near_relation_search(std::uint64_t M, unsigned m, std::uint64_t budget, std::uint64_t seed) {
    if (M < 1 || m < 1) raise(ErrorKind::invalid_argument, "near_relation_search: need M >= 1 and m >= 1");
    if (m > 64) raise(ErrorKind::overflow, "near_relation_search: m too large");
    if (budget < 1) raise(ErrorKind::invalid_argument, "near_relation_search: budget must be >= 1");
    const Items items(M, m);
    const double slack = items.eval_error();
    const std::uint64_t n_items = 2 * M;
    const double total = binomial(n_items + m - 1, m);
    Record rec;
    SearchResult out;
    if (static_cast<double>(budget) >= total) {
        out.exhaustive = true;
        for_each_multiset(n_items, m, 0, n_items, [&](const std::uint64_t* idx) {
            ++out.evaluated;
            if (!items.is_zero(idx)) rec.offer(std::abs(items.value(idx)), slack, items, idx);
        });
    } else {
        const CounterRng rng(seed);
        std::vector<std::uint64_t> idx(m);
        for (std::uint64_t i = 0; i < budget; ++i) {
            for (unsigned j = 0; j < m; ++j) idx[j] = rng.bits64(i, j, Stream::relation_search) % n_items;
            std::sort(idx.begin(), idx.end());
            ++out.evaluated;
            if (!items.is_zero(idx.data())) rec.offer(std::abs(items.value(idx.data())), slack, items, idx.data());
        }
    }
    if (rec.candidates.empty()) raise(ErrorKind::degenerate_input, "near_relation_search: every sampled sum was exactly zero");
    auto [tuple, value] = settle(rec, slack, 20);
    out.tuple = std::move(tuple);
    out.value = std::move(value);
    return out;
}

}  // namespace etlab
