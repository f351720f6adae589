#include "interestflow/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "interestflow/errors.hpp"

namespace iflow {

double Histogram::center(std::size_t i) const {
  if (scale == HistScale::logarithmic) return std::sqrt(edges[i] * edges[i + 1]);
  return 0.5 * (edges[i] + edges[i + 1]);
}

double Histogram::total() const {
  double t = 0.0;
  for (double c : counts) t += c;
  return t;
}

std::size_t Histogram::nonzero_bins() const {
  std::size_t n = 0;
  for (double c : counts) n += c > 0.0;
  return n;
}

namespace {

void fill_counts(Histogram& hist, std::span<const double> values) {
  const auto& edges = hist.edges;
  for (double v : values) {
    if (v < edges.front() || v > edges.back()) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t idx = static_cast<std::size_t>(it - edges.begin());
    idx = idx == 0 ? 0 : idx - 1;                       // v == front
    if (idx >= hist.counts.size()) idx = hist.counts.size() - 1;  // v == back
    hist.counts[idx] += 1.0;
  }
}

}  // namespace

Histogram make_log_histogram(std::span<const double> values, int bins_per_decade) {
  if (bins_per_decade <= 0) throw InvalidSpec("bins_per_decade must be positive");
  double vmin = 0.0, vmax = 0.0;
  bool seen = false;
  for (double v : values) {
    if (v <= 0.0) continue;
    if (!seen) {
      vmin = vmax = v;
      seen = true;
    } else {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  Histogram hist;
  hist.scale = HistScale::logarithmic;
  if (!seen) return hist;

  const double step = 1.0 / bins_per_decade;
  auto edge_at = [step](long long k) { return std::pow(10.0, k * step); };
  long long k0 = static_cast<long long>(std::floor(std::log10(vmin) / step));
  while (edge_at(k0) > vmin) --k0;  // guard against rounding up past vmin
  long long k1 = k0 + 1;
  while (edge_at(k1) < vmax) ++k1;

  for (long long k = k0; k <= k1; ++k) hist.edges.push_back(edge_at(k));
  hist.counts.assign(hist.edges.size() - 1, 0.0);
  fill_counts(hist, values);
  return hist;
}

Histogram make_linear_histogram(std::span<const double> values, double bin_width,
                                double origin) {
  if (!(bin_width > 0.0)) throw InvalidSpec("bin_width must be positive");
  Histogram hist;
  if (values.empty()) return hist;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  auto bin_of = [&](double v) {
    return static_cast<long long>(std::floor((v - origin) / bin_width));
  };
  long long b0 = bin_of(*mn);
  long long b1 = bin_of(*mx);
  while (origin + b0 * bin_width > *mn) --b0;
  while (origin + (b1 + 1) * bin_width <= *mx) ++b1;
  for (long long b = b0; b <= b1 + 1; ++b) {
    hist.edges.push_back(origin + b * bin_width);
  }
  hist.counts.assign(hist.edges.size() - 1, 0.0);
  fill_counts(hist, values);
  return hist;
}

Histogram make_histogram(std::span<const double> values,
                         std::vector<double> edges, HistScale scale) {
  if (edges.size() < 2) throw InvalidSpec("need at least two bin edges");
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw InvalidSpec("bin edges must be strictly increasing");
  }
  Histogram hist;
  hist.scale = scale;
  hist.edges = std::move(edges);
  hist.counts.assign(hist.edges.size() - 1, 0.0);
  fill_counts(hist, values);
  return hist;
}

}  // namespace iflow
