#include "numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/erf.hpp>

namespace freqsev {

namespace {

// Boost's default policy promotes double to long double internally; the
// plain-double path is ~3x faster and still gives ~1e-15, which is well
// inside every tolerance used here.
using fast_policy = boost::math::policies::policy<
    boost::math::policies::promote_double<false>>;

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kTwoPi = 6.2831853071795864769;

} // namespace

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must lie in (0, 1)");
  if (p < 0.5)
    return -kSqrt2 * boost::math::erfc_inv(2.0 * p, fast_policy());
  return kSqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p), fast_policy());
}

namespace {

// Gauss-Legendre abscissae/weights used by the Drezner-Wesolowsky/Genz
// scheme below; the rule order grows with |rho|.
const double kGL6x[] = {-0.9324695142031521, -0.6612093864662645,
                        -0.2386191860831969};
const double kGL6w[] = {0.1713244923791704, 0.3607615730481386,
                        0.4679139345726910};
const double kGL12x[] = {-0.9815606342467192, -0.9041172563704749,
                         -0.7699026741943047, -0.5873179542866175,
                         -0.3678314989981802, -0.1252334085114689};
const double kGL12w[] = {0.04717533638651183, 0.1069393259953184,
                         0.1600783285433462,  0.2031674267230659,
                         0.2334925365383548,  0.2491470458134028};
const double kGL20x[] = {-0.9931285991850949, -0.9639719272779138,
                         -0.9122344282513259, -0.8391169718222188,
                         -0.7463319064601508, -0.6360536807265150,
                         -0.5108670019508271, -0.3737060887154195,
                         -0.2277858511416451, -0.07652652113349732};
const double kGL20w[] = {0.01761400713915212, 0.04060142980038694,
                         0.06267204833410907, 0.08327674157670475,
                         0.1019301198172404,  0.1181945319615184,
                         0.1316886384491766,  0.1420961093183820,
                         0.1491729864726037,  0.1527533871307258};

// Genz's hybrid algorithm for P(X > h, Y > k) under a standard bivariate
// normal law: Gauss-Legendre in the correlation angle for |r| < 0.925 and
// the singularity-subtracted expansion near |r| = 1.
double bvn_upper(double dh, double dk, double r) {
  const double* gx;
  const double* gw;
  int lg;
  if (std::fabs(r) < 0.3) {
    gx = kGL6x;
    gw = kGL6w;
    lg = 3;
  } else if (std::fabs(r) < 0.75) {
    gx = kGL12x;
    gw = kGL12w;
    lg = 6;
  } else {
    gx = kGL20x;
    gw = kGL20w;
    lg = 10;
  }

  double h = dh;
  double k = dk;
  double hk = h * k;
  double bvn = 0.0;

  if (std::fabs(r) < 0.925) {
    if (std::fabs(r) > 0.0) {
      const double hs = (h * h + k * k) / 2.0;
      const double asr = std::asin(r);
      for (int i = 0; i < lg; ++i) {
        for (int is = -1; is <= 1; is += 2) {
          const double sn = std::sin(asr * (is * gx[i] + 1.0) / 2.0);
          bvn += gw[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
      }
      bvn = bvn * asr / (2.0 * kTwoPi);
    }
    return bvn + normal_cdf(-h) * normal_cdf(-k);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::fabs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -(bs / as + hk) / 2.0;
    if (asr > -100.0)
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 +
             c * d * as * as / 5.0);
    if (-hk < 100.0) {
      const double b = std::sqrt(bs);
      const double sp = std::sqrt(kTwoPi) * normal_cdf(-b / a);
      bvn -= std::exp(-hk / 2.0) * sp * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (int i = 0; i < lg; ++i) {
      for (int is = -1; is <= 1; is += 2) {
        const double xs_lin = a * (is * gx[i] + 1.0);
        const double xs = xs_lin * xs_lin;
        const double rs = std::sqrt(1.0 - xs);
        asr = -(bs / xs + hk) / 2.0;
        if (asr > -100.0) {
          const double sp = 1.0 + c * xs * (1.0 + d * xs);
          const double ep =
              std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
          bvn += a * gw[i] * std::exp(asr) * (ep - sp);
        }
      }
    }
    bvn = -bvn / kTwoPi;
  }
  if (r > 0.0)
    return bvn + normal_cdf(-std::max(h, k));
  bvn = -bvn;
  if (k > h)
    bvn += normal_cdf(k) - normal_cdf(h);
  return bvn;
}

} // namespace

double bivariate_normal_cdf(double x, double y, double rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw std::domain_error("bivariate_normal_cdf: rho must lie in (-1, 1)");
  const double p = bvn_upper(-x, -y, rho);
  return std::clamp(p, 0.0, 1.0);
}

namespace {

// Kronrod-15 abscissae (positive half) with the embedded Gauss-7 rule.
const double kKronrodX[8] = {
    0.9914553711208126392069, 0.9491079123427585245262,
    0.8648644233597690727897, 0.7415311855993944398639,
    0.5860872354676911302941, 0.4058451513773971669066,
    0.2077849550078984676007, 0.0};
const double kKronrodW[8] = {
    0.0229353220105292249637, 0.0630920926299785532907,
    0.1047900103222501838399, 0.1406532597155259187452,
    0.1690047266392679028266, 0.1903505780647854099133,
    0.2044329400752988924142, 0.2094821410847278280130};
const double kGauss7W[4] = {0.1294849661688696932706, 0.2797053914892766679015,
                            0.3818300505051189449504,
                            0.4179591836734693877551};

struct PanelResult {
  double value = 0.0;
  double error = 0.0;
};

PanelResult gauss_kronrod_15(const std::function<double(double)>& f, double a,
                             double b) {
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kKronrodW[7] * fc;
  double gauss = kGauss7W[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodX[i];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kKronrodW[i] * fsum;
    if (i % 2 == 1)
      gauss += kGauss7W[i / 2] * fsum;
  }
  PanelResult r;
  r.value = kron * half;
  // |K15 - G7| is a conservative bound on the K15 error; cheap panels make
  // the extra subdivisions it causes irrelevant.
  r.error = std::fabs(kron - gauss) * std::fabs(half);
  return r;
}

struct Interval {
  double a, b, value, error;
};

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  if (a == b)
    return 0.0;
  std::vector<Interval> stack;
  PanelResult whole = gauss_kronrod_15(f, a, b);
  stack.push_back({a, b, whole.value, whole.error});
  double total_value = whole.value;
  double total_error = whole.error;
  int splits = 0;
  while (total_error >
         std::max(opts.abs_tol, opts.rel_tol * std::fabs(total_value))) {
    if (++splits > opts.max_subdivisions)
      throw numerical_error(
          "integrate: subdivision budget exhausted (error " +
          std::to_string(total_error) + " over [" + std::to_string(a) + ", " +
          std::to_string(b) + "])");
    auto worst = std::max_element(
        stack.begin(), stack.end(),
        [](const Interval& p, const Interval& q) { return p.error < q.error; });
    const Interval iv = *worst;
    stack.erase(worst);
    const double mid = 0.5 * (iv.a + iv.b);
    PanelResult left = gauss_kronrod_15(f, iv.a, mid);
    PanelResult right = gauss_kronrod_15(f, mid, iv.b);
    total_value += left.value + right.value - iv.value;
    total_error += left.error + right.error - iv.error;
    stack.push_back({iv.a, mid, left.value, left.error});
    stack.push_back({mid, iv.b, right.value, right.error});
  }
  return total_value;
}

namespace {

struct VectorInterval {
  double a, b;
  std::vector<double> value;
  std::vector<double> error;
};

VectorInterval gauss_kronrod_15_many(
    const std::function<void(double, std::span<double>)>& f, std::size_t m,
    double a, double b) {
  const double c = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::vector<double> kron(m, 0.0), gauss(m, 0.0), fx(m), f2(m);
  f(c, fx);
  for (std::size_t j = 0; j < m; ++j) {
    kron[j] = kKronrodW[7] * fx[j];
    gauss[j] = kGauss7W[3] * fx[j];
  }
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodX[i];
    f(c - dx, fx);
    f(c + dx, f2);
    for (std::size_t j = 0; j < m; ++j) {
      const double fsum = fx[j] + f2[j];
      kron[j] += kKronrodW[i] * fsum;
      if (i % 2 == 1)
        gauss[j] += kGauss7W[i / 2] * fsum;
    }
  }
  VectorInterval r;
  r.a = a;
  r.b = b;
  r.value.resize(m);
  r.error.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    r.value[j] = kron[j] * half;
    r.error[j] = std::fabs(kron[j] - gauss[j]) * std::fabs(half);
  }
  return r;
}

} // namespace

std::vector<double> integrate_many(
    const std::function<void(double, std::span<double>)>& f, std::size_t m,
    double a, double b, const QuadratureOptions& opts) {
  std::vector<double> total_value(m, 0.0);
  if (a == b)
    return total_value;
  std::vector<VectorInterval> stack;
  stack.push_back(gauss_kronrod_15_many(f, m, a, b));
  std::vector<double> total_error(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    total_value[j] = stack[0].value[j];
    total_error[j] = stack[0].error[j];
  }
  auto scaled_error = [&](const std::vector<double>& err) {
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double tol =
          std::max(opts.abs_tol, opts.rel_tol * std::fabs(total_value[j]));
      worst = std::max(worst, err[j] / tol);
    }
    return worst;
  };
  int splits = 0;
  while (scaled_error(total_error) > 1.0) {
    if (++splits > opts.max_subdivisions)
      throw numerical_error("integrate_many: subdivision budget exhausted");
    std::size_t worst_i = 0;
    double worst = -1.0;
    for (std::size_t i = 0; i < stack.size(); ++i) {
      const double s = scaled_error(stack[i].error);
      if (s > worst) {
        worst = s;
        worst_i = i;
      }
    }
    VectorInterval iv = std::move(stack[worst_i]);
    stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(worst_i));
    const double mid = 0.5 * (iv.a + iv.b);
    VectorInterval left = gauss_kronrod_15_many(f, m, iv.a, mid);
    VectorInterval right = gauss_kronrod_15_many(f, m, mid, iv.b);
    for (std::size_t j = 0; j < m; ++j) {
      total_value[j] += left.value[j] + right.value[j] - iv.value[j];
      total_error[j] += left.error[j] + right.error[j] - iv.error[j];
    }
    stack.push_back(std::move(left));
    stack.push_back(std::move(right));
  }
  return total_value;
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol, int max_iter) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0)
    return a;
  if (fb == 0.0)
    return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw numerical_error("find_root: endpoints do not bracket a root");
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol =
        2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
        0.5 * x_tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol || fb == 0.0)
      return b;
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      // Inverse quadratic interpolation, falling back to secant.
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0)
        q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol * q),
                             std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::fabs(d) > tol)
      b += d;
    else
      b += xm > 0.0 ? tol : -tol;
    fb = f(b);
  }
  throw numerical_error("find_root: iteration budget exhausted");
}

void expand_bracket(const std::function<double(double)>& f, double& lo,
                    double& hi, double min_lo, double max_hi, int max_steps) {
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < max_steps; ++i) {
    if ((flo > 0.0) != (fhi > 0.0) || flo == 0.0 || fhi == 0.0)
      return;
    const double width = hi - lo;
    if (lo > min_lo) {
      lo = std::max(min_lo, lo - width);
      flo = f(lo);
    }
    if ((flo > 0.0) != (fhi > 0.0))
      return;
    if (hi < max_hi) {
      hi = std::min(max_hi, hi + 2.0 * width);
      fhi = f(hi);
    }
    if (lo <= min_lo && hi >= max_hi &&
        (flo > 0.0) == (fhi > 0.0))
      break;
  }
  throw numerical_error("expand_bracket: no sign change found");
}

double log_expm1(double x) {
  if (x <= 0.0)
    throw std::domain_error("log_expm1: x must be positive");
  if (x > 36.7)
    return x + std::log1p(-std::exp(-x));
  return std::log(std::expm1(x));
}

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    double s = 0.0;
    for (double v : values)
      s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace freqsev
