#include "scamlgp/priors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scamlgp {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Series expansion of P(a, x), good for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), good for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("regularized_gamma_p: a must be positive");
  if (x < 0.0) throw std::invalid_argument("regularized_gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

PriorDist PriorDist::gamma_dist(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::invalid_argument("gamma_dist: shape and rate must be positive");
  }
  return PriorDist{PriorFamily::kGamma, shape, rate};
}

PriorDist PriorDist::log_normal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("log_normal: sigma must be positive");
  return PriorDist{PriorFamily::kLogNormal, mu, sigma};
}

PriorDist PriorDist::flat() { return PriorDist{PriorFamily::kFlat, 0.0, 1.0}; }

double PriorDist::log_pdf(double x) const {
  switch (family) {
    case PriorFamily::kGamma: {
      if (!(x > 0.0)) return kNegInf;
      return a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(x) - b * x;
    }
    case PriorFamily::kLogNormal: {
      if (!(x > 0.0)) return kNegInf;
      const double z = (std::log(x) - a) / b;
      return -std::log(x) - std::log(b) - 0.5 * kLogTwoPi - 0.5 * z * z;
    }
    case PriorFamily::kFlat:
      return 0.0;
  }
  return kNegInf;
}

double PriorDist::dlogpdf_dlogx(double x) const {
  switch (family) {
    case PriorFamily::kGamma:
      return (a - 1.0) - b * x;
    case PriorFamily::kLogNormal:
      return -1.0 - (std::log(x) - a) / (b * b);
    case PriorFamily::kFlat:
      return 0.0;
  }
  return 0.0;
}

double PriorDist::cdf(double x) const {
  switch (family) {
    case PriorFamily::kGamma:
      return x <= 0.0 ? 0.0 : regularized_gamma_p(a, b * x);
    case PriorFamily::kLogNormal:
      return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - a) / b);
    case PriorFamily::kFlat:
      throw std::invalid_argument("cdf: flat prior has no CDF");
  }
  return 0.0;
}

double PriorDist::median() const {
  switch (family) {
    case PriorFamily::kGamma: {
      // Bisection on the CDF; bracket grows from the mean.
      double hi = a / b;
      while (cdf(hi) < 0.5) hi *= 2.0;
      double lo = 0.0;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < 0.5) {
          lo = mid;
        } else {
          hi = mid;
        }
        if (hi - lo < 1e-14 * (1.0 + hi)) break;
      }
      return 0.5 * (lo + hi);
    }
    case PriorFamily::kLogNormal:
      return std::exp(a);
    case PriorFamily::kFlat:
      throw std::invalid_argument("median: flat prior has no median");
  }
  return 0.0;
}

double PriorDist::sample(Rng& rng) const {
  switch (family) {
    case PriorFamily::kGamma:
      return rng.gamma(a, b);
    case PriorFamily::kLogNormal:
      return std::exp(a + b * rng.normal());
    case PriorFamily::kFlat:
      throw std::invalid_argument("sample: flat prior cannot be sampled without a box");
  }
  return 0.0;
}

double HyperPrior::clip(double x) const {
  if (x < lower) return lower;
  if (x > upper) return upper;
  return x;
}

GpHyperPriors GpHyperPriors::defaults() {
  GpHyperPriors p;
  p.lengthscale = HyperPrior{PriorDist::gamma_dist(3.0, 6.0), 1e-4, 1e2};
  p.outputscale = HyperPrior{PriorDist::gamma_dist(2.0, 0.15), 1e-4, 1e2};
  p.noise = HyperPrior{PriorDist::log_normal(-8.0, 2.0), 1e-8, 1e-2};
  return p;
}

GpHyperPriors GpHyperPriors::test_kernel_defaults() {
  GpHyperPriors p;
  p.lengthscale = HyperPrior{PriorDist::log_normal(0.5, 1.5), 1e-4, 1e2};
  p.outputscale = HyperPrior{PriorDist::log_normal(-2.0, 3.0), 1e-4, 1e2};
  p.noise = HyperPrior{PriorDist::log_normal(-8.0, 2.0), 1e-8, 1e-2};
  return p;
}

GpHyperPriors GpHyperPriors::flat() {
  GpHyperPriors p;
  p.lengthscale = HyperPrior{PriorDist::flat(), 1e-4, 1e2};
  p.outputscale = HyperPrior{PriorDist::flat(), 1e-4, 1e2};
  p.noise = HyperPrior{PriorDist::flat(), 1e-8, 1e-2};
  return p;
}

TestTaskPriors TestTaskPriors::defaults() {
  TestTaskPriors p;
  p.gp = GpHyperPriors::test_kernel_defaults();
  p.weight = HyperPrior{PriorDist::gamma_dist(1.0, 1.0), 1e-6, 1e2};
  return p;
}

}  // namespace scamlgp
