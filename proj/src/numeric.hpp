// numeric.hpp: quadrature, root finding and normal-distribution primitives
// shared by the distribution and estimation code.
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace freqsev {

/// Raised when an iterative numerical routine fails to reach its tolerance.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Standard normal cdf.
double normal_cdf(double x);

/// Standard normal quantile; requires p in (0, 1).
double normal_quantile(double p);

/// Standard normal density.
double normal_pdf(double x);

/// Bivariate standard normal cdf P(X <= x, Y <= y) with correlation rho.
/// Accurate to ~5e-16 for rho in (-1, 1).
double bivariate_normal_cdf(double x, double y, double rho);

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
};

/// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Throws numerical_error when the subdivision budget is exhausted before
/// the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

/// As integrate(), but refines the panels shared by several integrands at
/// once; returns one value per integrand. The error control is applied to
/// each component.
std::vector<double> integrate_many(
    const std::function<void(double, std::span<double>)>& f, std::size_t m,
    double a, double b, const QuadratureOptions& opts = {});

/// Brent root finding on [lo, hi]; f(lo) and f(hi) must bracket a root.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol = 1e-12, int max_iter = 200);

/// Expands [lo, hi] geometrically (within [min_lo, max_hi]) until f changes
/// sign across it. Throws numerical_error when no bracket is found.
void expand_bracket(const std::function<double(double)>& f, double& lo,
                    double& hi, double min_lo, double max_hi,
                    int max_steps = 200);

/// log(exp(x) - 1), stable for both tiny and large x > 0.
double log_expm1(double x);

/// Sums values by recursive pairwise reduction; deterministic for a fixed
/// ordering and more accurate than left-to-right accumulation.
double pairwise_sum(std::span<const double> values);

} // namespace freqsev
