// margins.hpp: the two marginal distributions of the joint claim model --
// Gamma average claim sizes in the (mu, delta) parameterization and
// zero-truncated Poisson claim counts.
#pragma once

#include <utility>

#include "rng.hpp"

namespace freqsev {

/// Gamma severity parameters. mean = mu, variance = mu^2 * delta; in the
/// usual shape/scale convention the shape is 1/delta and the scale mu*delta.
struct GammaParams {
  double mu;
  double delta;

  GammaParams(double mu_, double delta_);

  double shape() const { return 1.0 / delta; }
  double scale() const { return mu * delta; }
};

/// Zero-truncated Poisson parameter: the Poisson intensity before
/// conditioning on at least one claim.
struct ZtpParams {
  double lambda;

  explicit ZtpParams(double lambda_);
};

double gamma_pdf(double x, const GammaParams& p);
double gamma_log_pdf(double x, const GammaParams& p);

/// Regularized lower incomplete gamma at (shape, x/scale); 0 for x <= 0.
double gamma_cdf(double x, const GammaParams& p);

/// Inverse of gamma_cdf by safeguarded Newton within a maintained bracket,
/// to 1e-10 relative. Requires q in (0, 1).
double gamma_quantile(double q, const GammaParams& p);

/// Inverse-transform sample.
double gamma_sample(const GammaParams& p, Rng& rng);

/// (mean, variance) = (mu, mu^2 delta).
std::pair<double, double> gamma_mean_var(const GammaParams& p);

/// P(Y = y), y = 1, 2, ...
double ztp_pmf(int y, const ZtpParams& p);
double ztp_log_pmf(int y, const ZtpParams& p);

/// F_Y(y); equals 0 for y <= 0 (the support starts at 1).
double ztp_cdf(int y, const ZtpParams& p);

/// (F_Y(y-1), F_Y(y)) from a single pass; the joint density consumes both.
std::pair<double, double> ztp_cdf_pair(int y, const ZtpParams& p);

/// Smallest y >= 1 with F_Y(y) >= q; q in (0, 1).
int ztp_quantile(double q, const ZtpParams& p);

/// Rejection from a Poisson sampler for lambda >= 0.5 (zeros resampled),
/// sequential inverse-cdf below that.
int ztp_sample(const ZtpParams& p, Rng& rng);

/// (mean, variance): lambda/(1-e^-lambda) and
/// lambda(1 - e^-lambda (lambda+1))/(1-e^-lambda)^2.
std::pair<double, double> ztp_mean_var(const ZtpParams& p);

/// Smallest y with 1 - F_Y(y) < tail_tol; truncation bound for sums over y.
int ztp_tail_bound(const ZtpParams& p, double tail_tol = 1e-12);

} // namespace freqsev
