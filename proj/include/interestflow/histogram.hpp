#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace iflow {

enum class HistScale { linear, logarithmic };

// Binned distribution. Counts are stored as doubles so that histograms can
// also carry exact function evaluations for fitting; sample-built histograms
// hold integer values and their total equals the sample size.
struct Histogram {
  std::vector<double> edges;   // strictly increasing, size() + 1 when non-empty
  std::vector<double> counts;  // one per bin
  HistScale scale = HistScale::linear;

  std::size_t size() const { return counts.size(); }
  bool empty() const { return counts.empty(); }
  // Geometric center on logarithmic scale, arithmetic otherwise.
  double center(std::size_t i) const;
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  double total() const;
  std::size_t nonzero_bins() const;
};

// Log-spaced bins with `bins_per_decade` edges per factor of ten, covering all
// strictly positive values. Non-positive values are ignored; returns an empty
// histogram when nothing remains.
Histogram make_log_histogram(std::span<const double> values,
                             int bins_per_decade = 10);

// Fixed-width bins anchored at `origin`, spanning min..max of the values.
Histogram make_linear_histogram(std::span<const double> values, double bin_width,
                                double origin = 0.0);

// Bin into caller-provided edges. Values outside [front, back] are dropped;
// a value equal to the last edge lands in the final bin.
Histogram make_histogram(std::span<const double> values,
                         std::vector<double> edges, HistScale scale);

}  // namespace iflow
