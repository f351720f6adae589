#pragma once

#include <optional>
#include <random>

#include "interestflow/histogram.hpp"

namespace iflow {

// f(x) = amplitude * x^exponent, fitted by weighted least squares in log-log
// space. residual is the weighted RMS of log10 deviations.
struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  double residual = 0.0;
  std::optional<double> breakpoint;
};

PowerLawFit fit_power_law(const Histogram& hist);

// Two independent log-log fits split at the breakpoint minimizing the summed
// segment residual. `residual` is the combined weighted RMS over both sides.
struct DoublePowerLawFit {
  PowerLawFit left;
  PowerLawFit right;
  double breakpoint = 0.0;
  double residual = 0.0;
  double single_residual = 0.0;
  bool effectively_single = false;
};

DoublePowerLawFit fit_double_power_law(const Histogram& hist);

// Skew-normal density 2/omega * phi((x-xi)/omega) * Phi(alpha*(x-xi)/omega),
// least-squares fitted to bin heights normalized to unit area. gamma is the
// moment skewness implied by the shape; mode is in input units.
struct SkewGaussianFit {
  double location = 0.0;  // xi
  double scale = 0.0;     // omega
  double shape = 0.0;     // alpha
  double gamma = 0.0;
  double mode = 0.0;
  double residual = 0.0;
};

SkewGaussianFit fit_skew_gaussian(const Histogram& hist);

double skew_normal_pdf(double x, double xi, double omega, double alpha);
double skew_normal_gamma(double alpha);
double skew_normal_mode(double xi, double omega, double alpha);
double sample_skew_normal(std::mt19937_64& rng, double xi, double omega,
                          double alpha);

}  // namespace iflow
