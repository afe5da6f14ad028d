#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "etlab/cosine_series.hpp"
#include "etlab/random_model.hpp"

namespace etlab {

enum class CurveSource { model_analytic, empirical_clipped, synthetic };
std::string_view to_string(CurveSource s) noexcept;

/// L(lambda) = E[e^{lambda X}] on an increasing positive grid, stored as
/// log values. L(0) = 1 is an implicit node. Log-convexity is checked on
/// construction.
class LaplaceCurve {
  public:
    LaplaceCurve(std::vector<double> lambdas, std::vector<double> log_values, CurveSource source);

    static LaplaceCurve from_values(std::vector<double> lambdas, const std::vector<double>& values, CurveSource source);

    const std::vector<double>& lambdas() const noexcept { return lambdas_; }
    const std::vector<double>& log_values() const noexcept { return log_values_; }
    CurveSource source() const noexcept { return source_; }
    double lambda_max() const noexcept { return lambdas_.back(); }

    /// Cubic (4-node) Lagrange interpolation of log L; exact for the
    /// Gaussian curve. Throws ErrorKind::out_of_range outside [0, lambda_max].
    double log_value(double lambda) const;

  private:
    std::vector<double> lambdas_;      // includes the leading 0
    std::vector<double> log_values_;   // includes the leading 0
    CurveSource source_;
};

/// Geometric grid from 2^-6 with ratio 2^(1/8), up to cap.
std::vector<double> default_lambda_grid(double cap);

LaplaceCurve model_curve(TransformEngine& engine, std::span<const double> lambdas);

/// min over grid nodes (lambda = 0 included) of e^{-lambda V} L(lambda).
double chernov_upper(const LaplaceCurve& curve, double V);

/// lambda* with L(lambda*) = 2 e^{lambda* V}, by bisection on
/// log L - log 2 - lambda V.
double solve_lambda(const LaplaceCurve& curve, double V);

/// (1/4) L(lambda*)^2 / L(2 lambda*).
double pz_lower(const LaplaceCurve& curve, double V);

/// 3(2^{4/3} - 1) for divisor/zeta2, 3(2^{1/3} - 1) for circle.
double lau_log_exponent(Family family);

/// exp(-b V^4 (log V)^{-lau_log_exponent}); V > 1.
double lau_reference(double V, Family family, double b = 1.0);

/// Least-squares slope of log(-log p) against log V over points with 0 < p < 1.
double fit_exponent(std::span<const double> V, std::span<const double> p);

struct TailRow {
    double V = 0.0;
    double chernov = 0.0;
    double pz = 0.0;           // NaN when 2 lambda* leaves the grid or no crossing exists
    double mc = 0.0;
    double mc_std_error = 0.0;
    double reference = 0.0;    // NaN for V <= 1
};

struct TailReport {
    Family family = Family::divisor;
    std::vector<TailRow> rows;
};

TailReport tail_report(const LaplaceCurve& curve, std::span<const double> samples, std::span<const double> V_grid,
                       Family family, double b = 1.0);

}  // namespace etlab
