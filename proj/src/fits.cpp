#include "interestflow/fits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "interestflow/errors.hpp"
#include "interestflow/rng.hpp"

namespace iflow {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct LogPoint {
  double lx;
  double ly;
  double w;
};

std::vector<LogPoint> log_points(const Histogram& hist) {
  std::vector<LogPoint> pts;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const double x = hist.center(i);
    const double y = hist.counts[i];
    if (x <= 0.0 || y <= 0.0) continue;
    pts.push_back({std::log10(x), std::log10(y), y});
  }
  return pts;
}

struct SegmentFit {
  PowerLawFit fit;
  long double sse = 0.0;
  long double sw = 0.0;
};

SegmentFit fit_points(const std::vector<LogPoint>& pts) {
  if (pts.size() < 3) throw InsufficientSupport("need at least 3 nonzero bins");
  long double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sw += p.w;
    sx += p.w * p.lx;
    sy += p.w * p.ly;
    sxx += p.w * p.lx * p.lx;
    sxy += p.w * p.lx * p.ly;
  }
  const long double denom = sw * sxx - sx * sx;
  if (!(denom > 0)) throw InsufficientSupport("degenerate support for log-log fit");
  const long double b = (sw * sxy - sx * sy) / denom;
  const long double c = (sy - b * sx) / sw;
  long double sse = 0;
  for (const auto& p : pts) {
    const long double r = p.ly - (c + b * p.lx);
    sse += p.w * r * r;
  }
  SegmentFit out;
  out.fit.amplitude = std::pow(10.0, static_cast<double>(c));
  out.fit.exponent = static_cast<double>(b);
  out.fit.residual = std::sqrt(static_cast<double>(sse / sw));
  out.sse = sse;
  out.sw = sw;
  return out;
}

}  // namespace

PowerLawFit fit_power_law(const Histogram& hist) {
  return fit_points(log_points(hist)).fit;
}

DoublePowerLawFit fit_double_power_law(const Histogram& hist) {
  const auto pts = log_points(hist);
  if (pts.size() < 6) throw InsufficientSupport("need at least 6 nonzero bins");

  DoublePowerLawFit best;
  bool found = false;
  double best_objective = 0.0;
  SegmentFit best_left, best_right;
  for (std::size_t e = 1; e + 1 < hist.edges.size(); ++e) {
    const double cut = hist.edges[e];
    const double lcut = std::log10(cut);
    std::vector<LogPoint> left, right;
    for (const auto& p : pts) (p.lx < lcut ? left : right).push_back(p);
    if (left.size() < 3 || right.size() < 3) continue;
    SegmentFit lf = fit_points(left);
    SegmentFit rf = fit_points(right);
    const double objective = lf.fit.residual + rf.fit.residual;
    if (!found || objective < best_objective) {
      found = true;
      best_objective = objective;
      best_left = lf;
      best_right = rf;
      best.breakpoint = cut;
    }
  }
  if (!found) throw InsufficientSupport("no breakpoint leaves 3 bins per side");

  best.left = best_left.fit;
  best.right = best_right.fit;
  best.left.breakpoint = best.breakpoint;
  best.right.breakpoint = best.breakpoint;
  best.residual = std::sqrt(static_cast<double>(
      (best_left.sse + best_right.sse) / (best_left.sw + best_right.sw)));

  const SegmentFit single = fit_points(pts);
  best.single_residual = single.fit.residual;
  best.effectively_single =
      single.fit.residual < 1e-12 ||
      (single.fit.residual - best.residual) <= 0.2 * single.fit.residual;
  return best;
}

double skew_normal_pdf(double x, double xi, double omega, double alpha) {
  const double z = (x - xi) / omega;
  const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
  const double cdf = 0.5 * std::erfc(-alpha * z / std::sqrt(2.0));
  return 2.0 / omega * phi * cdf;
}

double skew_normal_gamma(double alpha) {
  const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
  const double b = delta * std::sqrt(2.0 / kPi);
  const double num = (4.0 - kPi) / 2.0 * b * b * b;
  const double den = std::pow(1.0 - 2.0 * delta * delta / kPi, 1.5);
  return num / den;
}

double skew_normal_mode(double xi, double omega, double alpha) {
  // Unimodal density; the mode sits within 1.5 omega of the location.
  double lo = xi - 1.5 * omega;
  double hi = xi + 1.5 * omega;
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (skew_normal_pdf(m1, xi, omega, alpha) <
        skew_normal_pdf(m2, xi, omega, alpha)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return 0.5 * (lo + hi);
}

double sample_skew_normal(std::mt19937_64& rng, double xi, double omega,
                          double alpha) {
  const double delta = alpha / std::sqrt(1.0 + alpha * alpha);
  const double u0 = normal01(rng);
  const double u1 = normal01(rng);
  const double z = delta * std::abs(u0) + std::sqrt(1.0 - delta * delta) * u1;
  return xi + omega * z;
}

namespace {

struct NelderMeadResult {
  std::array<double, 3> x{};
  double f = 0.0;
  bool converged = false;
};

template <typename F>
NelderMeadResult nelder_mead(F objective, std::array<double, 3> start,
                             double scale, int max_iter) {
  constexpr int kDim = 3;
  std::array<std::array<double, 3>, kDim + 1> xs;
  std::array<double, kDim + 1> fs;
  xs[0] = start;
  for (int i = 0; i < kDim; ++i) {
    xs[i + 1] = start;
    xs[i + 1][i] += scale * (std::abs(start[i]) > 1.0 ? std::abs(start[i]) : 1.0);
  }
  for (int i = 0; i <= kDim; ++i) fs[i] = objective(xs[i]);

  auto order = [&] {
    for (int i = 0; i <= kDim; ++i)
      for (int j = i + 1; j <= kDim; ++j)
        if (fs[j] < fs[i]) {
          std::swap(fs[i], fs[j]);
          std::swap(xs[i], xs[j]);
        }
  };

  NelderMeadResult result;
  for (int iter = 0; iter < max_iter; ++iter) {
    order();
    double spread = 0.0;
    for (int i = 0; i < kDim; ++i)
      spread = std::max(spread, std::abs(xs[kDim][i] - xs[0][i]));
    if (fs[kDim] - fs[0] <= 1e-13 * (1.0 + std::abs(fs[0])) && spread <= 1e-9) {
      result.converged = true;
      break;
    }
    std::array<double, 3> centroid{};
    for (int i = 0; i < kDim; ++i) {
      for (int j = 0; j < kDim; ++j) centroid[j] += xs[i][j] / kDim;
    }
    auto blend = [&](double t) {
      std::array<double, 3> p;
      for (int j = 0; j < kDim; ++j)
        p[j] = centroid[j] + t * (xs[kDim][j] - centroid[j]);
      return p;
    };
    const auto reflected = blend(-1.0);
    const double fr = objective(reflected);
    if (fr < fs[0]) {
      const auto expanded = blend(-2.0);
      const double fe = objective(expanded);
      if (fe < fr) {
        xs[kDim] = expanded;
        fs[kDim] = fe;
      } else {
        xs[kDim] = reflected;
        fs[kDim] = fr;
      }
    } else if (fr < fs[kDim - 1]) {
      xs[kDim] = reflected;
      fs[kDim] = fr;
    } else {
      const auto contracted = blend(fr < fs[kDim] ? -0.5 : 0.5);
      const double fc = objective(contracted);
      if (fc < std::min(fr, fs[kDim])) {
        xs[kDim] = contracted;
        fs[kDim] = fc;
      } else {
        for (int i = 1; i <= kDim; ++i) {
          for (int j = 0; j < kDim; ++j)
            xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
          fs[i] = objective(xs[i]);
        }
      }
    }
  }
  order();
  result.x = xs[0];
  result.f = fs[0];
  return result;
}

}  // namespace

SkewGaussianFit fit_skew_gaussian(const Histogram& hist) {
  if (hist.nonzero_bins() < 5) {
    throw InsufficientSupport("need at least 5 nonzero bins");
  }
  const double total = hist.total();
  std::vector<double> centers(hist.size()), heights(hist.size());
  for (std::size_t i = 0; i < hist.size(); ++i) {
    centers[i] = hist.center(i);
    heights[i] = hist.counts[i] / (total * hist.width(i));
  }

  // Moment-based initial guess.
  double mean = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i)
    mean += hist.counts[i] * centers[i] / total;
  double m2 = 0.0, m3 = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    const double d = centers[i] - mean;
    m2 += hist.counts[i] * d * d / total;
    m3 += hist.counts[i] * d * d * d / total;
  }
  const double sd = std::sqrt(std::max(m2, 1e-300));
  double g1 = m3 / (sd * sd * sd);
  const double gamma_sup = 0.5 * (4.0 - kPi) *
                           std::pow(2.0 / kPi, 1.5) /
                           std::pow(1.0 - 2.0 / kPi, 1.5);  // limit alpha -> inf
  g1 = std::clamp(g1, -0.9 * gamma_sup, 0.9 * gamma_sup);
  double alpha0 = 0.0, delta = 0.0;
  if (std::abs(g1) > 1e-4) {
    const double t = std::pow(std::abs(g1), 2.0 / 3.0);
    const double d2 =
        (kPi / 2.0) * t / (t + std::pow((4.0 - kPi) / 2.0, 2.0 / 3.0));
    delta = std::copysign(std::min(std::sqrt(d2), 0.995), g1);
    alpha0 = delta / std::sqrt(1.0 - delta * delta);
  }
  const double omega0 = sd / std::sqrt(std::max(1.0 - 2.0 * delta * delta / kPi, 0.05));
  const double xi0 = mean - omega0 * delta * std::sqrt(2.0 / kPi);

  auto objective = [&](const std::array<double, 3>& p) {
    const double xi = p[0];
    const double omega = std::exp(p[1]);
    const double alpha = p[2];
    double sse = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double r = heights[i] - skew_normal_pdf(centers[i], xi, omega, alpha);
      sse += r * r;
    }
    return sse;
  };

  const std::array<std::array<double, 3>, 3> starts = {{
      {xi0, std::log(omega0), alpha0},
      {xi0, std::log(omega0), 0.0},
      {mean, std::log(sd), 2.0 * alpha0},
  }};
  NelderMeadResult best;
  bool any = false;
  for (const auto& start : starts) {
    const auto run = nelder_mead(objective, start, 0.25, 4000);
    if (!run.converged) continue;
    if (!any || run.f < best.f) {
      best = run;
      any = true;
    }
  }
  if (!any) throw NonConvergence("skew-gaussian fit exhausted iteration budget");

  SkewGaussianFit fit;
  fit.location = best.x[0];
  fit.scale = std::exp(best.x[1]);
  fit.shape = best.x[2];
  fit.gamma = skew_normal_gamma(fit.shape);
  fit.mode = skew_normal_mode(fit.location, fit.scale, fit.shape);
  fit.residual = std::sqrt(best.f / static_cast<double>(centers.size()));
  return fit;
}

}  // namespace iflow
