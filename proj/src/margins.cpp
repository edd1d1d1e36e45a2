#include "margins.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "numeric.hpp"

namespace freqsev {

namespace {

using fast_policy = boost::math::policies::policy<
    boost::math::policies::promote_double<false>>;

double regularized_gamma_p(double a, double x) {
  return boost::math::gamma_p(a, x, fast_policy());
}

double regularized_gamma_q(double a, double x) {
  return boost::math::gamma_q(a, x, fast_policy());
}

} // namespace

GammaParams::GammaParams(double mu_, double delta_) : mu(mu_), delta(delta_) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("GammaParams: mu must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("GammaParams: delta must be positive");
}

ZtpParams::ZtpParams(double lambda_) : lambda(lambda_) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("ZtpParams: lambda must be positive");
}

double gamma_log_pdf(double x, const GammaParams& p) {
  if (!(x > 0.0))
    throw std::domain_error("gamma_pdf: x must be positive");
  const double k = p.shape();
  const double s = p.scale();
  return k * std::log(x / s) - x / s - std::log(x) - std::lgamma(k);
}

double gamma_pdf(double x, const GammaParams& p) {
  return std::exp(gamma_log_pdf(x, p));
}

double gamma_cdf(double x, const GammaParams& p) {
  if (x <= 0.0)
    return 0.0;
  return regularized_gamma_p(p.shape(), x / p.scale());
}

double gamma_quantile(double q, const GammaParams& p) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("gamma_quantile: q must lie in (0, 1)");
  const double k = p.shape();
  const double s = p.scale();

  // Wilson-Hilferty starting point, with a small-shape fallback from the
  // left-tail asymptotic F(x) ~ (x/s)^k / Gamma(k+1).
  const double z = normal_quantile(q);
  const double g = 1.0 - 1.0 / (9.0 * k) + z / (3.0 * std::sqrt(k));
  double x = k * s * g * g * g;
  if (!(x > 0.0) || !std::isfinite(x))
    x = s * std::exp((std::log(q) + std::lgamma(k + 1.0)) / k);

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 200; ++iter) {
    const double f = gamma_cdf(x, p) - q;
    if (f > 0.0)
      hi = x;
    else if (f < 0.0)
      lo = x;
    else
      return x;
    const double d = gamma_pdf(x, p);
    double xn = d > 0.0 ? x - f / d : 0.0;
    if (!(xn > lo && xn < hi))
      xn = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
    if (std::fabs(xn - x) <= 1e-10 * std::fabs(xn))
      return xn;
    x = xn;
  }
  throw numerical_error("gamma_quantile: did not converge");
}

double gamma_sample(const GammaParams& p, Rng& rng) {
  return gamma_quantile(uniform01(rng), p);
}

std::pair<double, double> gamma_mean_var(const GammaParams& p) {
  return {p.mu, p.mu * p.mu * p.delta};
}

double ztp_log_pmf(int y, const ZtpParams& p) {
  if (y < 1)
    throw std::domain_error("ztp_pmf: y must be >= 1");
  const double lam = p.lambda;
  return y * std::log(lam) - std::lgamma(y + 1.0) - lam -
         std::log1p(-std::exp(-lam));
}

double ztp_pmf(int y, const ZtpParams& p) {
  return std::exp(ztp_log_pmf(y, p));
}

namespace {

// Poisson cdf P(N <= y). Forward recurrence for moderate y, regularized
// incomplete gamma beyond that.
double poisson_cdf(int y, double lambda) {
  if (y < 0)
    return 0.0;
  if (y <= 256) {
    double term = std::exp(-lambda);
    double cum = term;
    for (int k = 1; k <= y; ++k) {
      term *= lambda / k;
      cum += term;
    }
    return cum < 1.0 ? cum : 1.0;
  }
  return regularized_gamma_q(static_cast<double>(y) + 1.0, lambda);
}

} // namespace

double ztp_cdf(int y, const ZtpParams& p) {
  if (y < 1)
    return 0.0;
  const double p0 = std::exp(-p.lambda);
  const double f = (poisson_cdf(y, p.lambda) - p0) / (1.0 - p0);
  return std::min(std::max(f, 0.0), 1.0);
}

std::pair<double, double> ztp_cdf_pair(int y, const ZtpParams& p) {
  return {ztp_cdf(y - 1, p), ztp_cdf(y, p)};
}

int ztp_quantile(double q, const ZtpParams& p) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error("ztp_quantile: q must lie in (0, 1)");
  const double lam = p.lambda;
  const double p0 = std::exp(-lam);
  const double target = q * (1.0 - p0) + p0; // Poisson-scale target
  double term = p0;
  double cum = p0;
  int y = 0;
  const int cap = ztp_tail_bound(p, 1e-15) + 2;
  while (y < cap) {
    ++y;
    term *= lam / y;
    cum += term;
    if (cum >= target)
      return y;
  }
  return cap;
}

int ztp_sample(const ZtpParams& p, Rng& rng) {
  const double lam = p.lambda;
  if (lam < 0.5)
    return ztp_quantile(uniform01(rng), p);
  // Rejection from the untruncated Poisson: resample until nonzero.
  for (;;) {
    double u = uniform01(rng);
    double term = std::exp(-lam);
    double cum = term;
    int k = 0;
    while (u > cum && k < 100000) {
      ++k;
      term *= lam / k;
      cum += term;
    }
    if (k >= 1)
      return k;
  }
}

std::pair<double, double> ztp_mean_var(const ZtpParams& p) {
  const double lam = p.lambda;
  const double denom = -std::expm1(-lam); // 1 - e^-lambda
  const double mean = lam / denom;
  const double var = lam * (1.0 - std::exp(-lam) * (lam + 1.0)) / (denom * denom);
  return {mean, var};
}

int ztp_tail_bound(const ZtpParams& p, double tail_tol) {
  const double lam = p.lambda;
  const double p0 = std::exp(-lam);
  // 1 - F_Y(y) < tol  <=>  P(N <= y) > 1 - tol (1 - p0)
  const double target = 1.0 - tail_tol * (1.0 - p0);
  double term = p0;
  double cum = p0;
  int y = 0;
  while (cum < target && y < 100000) {
    ++y;
    term *= lam / y;
    cum += term;
  }
  return std::max(y, 1);
}

} // namespace freqsev
