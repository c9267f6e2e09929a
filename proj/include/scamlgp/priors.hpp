#pragma once

#include "scamlgp/rng.hpp"

namespace scamlgp {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

// Standard normal CDF.
double normal_cdf(double z);

enum class PriorFamily { kGamma, kLogNormal, kFlat };

// One-dimensional prior over a positive scalar hyperparameter.
//
// Gamma uses the shape/rate convention: p(x) ~ x^(a-1) exp(-b x).
// LogNormal parameterizes log(x) ~ N(a, b^2).
// Flat is the improper density 1 (useful for reducing MAP to ML in tests).
struct PriorDist {
  PriorFamily family = PriorFamily::kFlat;
  double a = 0.0;
  double b = 1.0;

  static PriorDist gamma_dist(double shape, double rate);
  static PriorDist log_normal(double mu, double sigma);
  static PriorDist flat();

  double log_pdf(double x) const;
  // d log p / d log x, the natural gradient term when optimizing in log space.
  double dlogpdf_dlogx(double x) const;
  double cdf(double x) const;
  double median() const;
  double sample(Rng& rng) const;
};

// Prior plus the hard box the optimizer must respect.
struct HyperPrior {
  PriorDist dist;
  double lower = 1e-8;
  double upper = 1e8;

  bool contains(double x) const { return x >= lower && x <= upper; }
  double clip(double x) const;
  double sample_clipped(Rng& rng) const { return clip(dist.sample(rng)); }
  double median_clipped() const { return clip(dist.median()); }
};

// Priors for one GP's hyperparameters (shared across ARD dimensions).
struct GpHyperPriors {
  HyperPrior lengthscale;
  HyperPrior outputscale;
  HyperPrior noise;  // over the noise variance

  // Concentrated set used for meta-task GPs and the plain-GP baseline.
  static GpHyperPriors defaults();
  // Wide set for the residual test kernel, whose scale must adapt to
  // whatever the meta-task mixture fails to explain.
  static GpHyperPriors test_kernel_defaults();
  // Improper flat priors over the same boxes.
  static GpHyperPriors flat();
};

// Priors for the full test-task parameter block (kernel + noise + weights).
struct TestTaskPriors {
  GpHyperPriors gp = GpHyperPriors::test_kernel_defaults();
  HyperPrior weight;

  static TestTaskPriors defaults();
};

}  // namespace scamlgp
