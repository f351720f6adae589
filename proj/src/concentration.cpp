#include "interestflow/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "interestflow/errors.hpp"
#include "interestflow/histogram.hpp"
#include "interestflow/rng.hpp"

namespace iflow {

ActivityVector make_activity_vector(std::vector<std::uint32_t> counts) {
  ActivityVector v;
  v.counts = std::move(counts);
  v.total = std::accumulate(v.counts.begin(), v.counts.end(), std::uint64_t{0});
  return v;
}

CatalogAxis CatalogAxis::build(const SubredditCatalog& catalog,
                               const SubredditPool& pool) {
  CatalogAxis axis;
  axis.dimension = catalog.included_order().size();
  axis.pool_to_axis.assign(pool.size(), -1);
  for (std::size_t id = 0; id < pool.size(); ++id) {
    const auto idx = catalog.axis_index(pool.name(static_cast<std::uint32_t>(id)));
    if (idx) axis.pool_to_axis[id] = static_cast<std::int32_t>(*idx);
  }
  return axis;
}

ActivityVector activity_vector(const UserActivitySeries& series,
                               const CatalogAxis& axis) {
  ActivityVector v;
  v.counts.assign(axis.dimension, 0);
  for (const Event& e : series.events) {
    if (e.kind != EventKind::comment) continue;
    if (e.subreddit >= axis.pool_to_axis.size()) continue;
    const std::int32_t idx = axis.pool_to_axis[e.subreddit];
    if (idx < 0) continue;
    ++v.counts[static_cast<std::size_t>(idx)];
    ++v.total;
  }
  return v;
}

double gini(const ActivityVector& v) {
  if (v.total == 0) throw ZeroActivity("gini undefined for zero activity");
  std::vector<std::uint32_t> sorted = v.counts;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<std::int64_t>(sorted.size());
  __int128 numerator = 0;  // sum (2k - N - 1) * v_(k), exact
  for (std::int64_t k = 1; k <= n; ++k) {
    numerator += static_cast<__int128>(2 * k - n - 1) * sorted[k - 1];
  }
  return static_cast<double>(numerator) /
         (static_cast<double>(n) * static_cast<double>(v.total));
}

std::string_view to_string(GiniMode mode) {
  return mode == GiniMode::corrected ? "corrected" : "paper_literal";
}

GiniMode gini_mode_from_string(std::string_view name) {
  if (name == "corrected") return GiniMode::corrected;
  if (name == "paper_literal" || name == "paper-literal")
    return GiniMode::paper_literal;
  throw ConfigError("unknown gini mode: " + std::string(name));
}

GiniResult normalized_gini(const ActivityVector& v, GiniMode mode) {
  GiniResult result;
  result.mode = mode;
  result.raw = gini(v);
  const auto n = static_cast<std::uint64_t>(v.counts.size());
  const std::uint64_t total = v.total;
  if (mode == GiniMode::paper_literal) {
    result.g_star = total < n
                        ? static_cast<double>(n - total) / static_cast<double>(total)
                        : 0.0;
    if (result.g_star >= 1.0) {
      throw DegenerateNormalization(
          "paper-literal g* >= 1 (total <= dimension/2)");
    }
  } else {
    const std::uint64_t r = n == 0 ? 0 : total % n;
    result.g_star = static_cast<double>(r * (n - r)) /
                    (static_cast<double>(n) * static_cast<double>(total));
  }
  result.normalized = (result.raw - result.g_star) / (1.0 - result.g_star);
  return result;
}

ActivityVector null_model(std::uint64_t total, std::size_t dimension,
                          std::mt19937_64& rng) {
  ActivityVector v;
  v.counts.assign(dimension, 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    ++v.counts[uniform_below(rng, dimension)];
  }
  v.total = total;
  return v;
}

ActivityBinCurve gini_vs_activity(std::span<const UserVector> users,
                                  const GiniCurveOptions& options) {
  std::vector<double> totals;
  totals.reserve(users.size());
  for (const auto& u : users) {
    if (u.vec.total > 0) totals.push_back(static_cast<double>(u.vec.total));
  }
  if (totals.empty()) throw EmptyInput("no users with activity");

  const Histogram grid = make_log_histogram(totals, options.bins_per_decade);
  const std::size_t bins = grid.size();

  struct Accum {
    std::size_t n = 0;
    double sub_sum = 0.0;
    std::vector<double> sub_counts;
    double gini_sum = 0.0;
    double null_sum = 0.0;
    std::size_t gini_n = 0;
  };
  std::vector<Accum> accum(bins);

  const auto& edges = grid.edges;
  for (const auto& user : users) {
    if (user.vec.total == 0) continue;
    const double t = static_cast<double>(user.vec.total);
    auto it = std::upper_bound(edges.begin(), edges.end(), t);
    std::size_t idx = static_cast<std::size_t>(it - edges.begin());
    idx = idx == 0 ? 0 : idx - 1;
    if (idx >= bins) idx = bins - 1;
    Accum& a = accum[idx];

    const double n_subs = static_cast<double>(
        std::count_if(user.vec.counts.begin(), user.vec.counts.end(),
                      [](std::uint32_t c) { return c > 0; }));
    ++a.n;
    a.sub_sum += n_subs;
    a.sub_counts.push_back(n_subs);

    try {
      const GiniResult real = normalized_gini(user.vec, options.mode);
      std::mt19937_64 rng(derive_seed(options.seed, user.author));
      double null_mean = 0.0;
      const int reps = std::max(options.null_reps, 1);
      for (int rep = 0; rep < reps; ++rep) {
        const ActivityVector draw =
            null_model(user.vec.total, user.vec.dimension(), rng);
        null_mean += normalized_gini(draw, options.mode).normalized;
      }
      a.gini_sum += real.normalized;
      a.null_sum += null_mean / reps;
      ++a.gini_n;
    } catch (const DegenerateNormalization&) {
      // paper-literal mode is undefined for I <= N/2; such users still count
      // toward the subreddit statistics but not the gini means.
    }
  }

  ActivityBinCurve curve;
  curve.bin_edges = edges;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (auto& a : accum) {
    curve.n_users.push_back(a.n);
    if (a.n == 0) {
      curve.mean_subreddits.push_back(nan);
      curve.median_subreddits.push_back(nan);
    } else {
      curve.mean_subreddits.push_back(a.sub_sum / static_cast<double>(a.n));
      auto& sc = a.sub_counts;
      const std::size_t mid = sc.size() / 2;
      std::nth_element(sc.begin(), sc.begin() + mid, sc.end());
      double median = sc[mid];
      if (sc.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(sc.begin(), sc.begin() + mid));
      }
      curve.median_subreddits.push_back(median);
    }
    if (a.gini_n == 0) {
      curve.mean_gini.push_back(nan);
      curve.null_mean_gini.push_back(nan);
    } else {
      curve.mean_gini.push_back(a.gini_sum / static_cast<double>(a.gini_n));
      curve.null_mean_gini.push_back(a.null_sum / static_cast<double>(a.gini_n));
    }
  }
  return curve;
}

}  // namespace iflow
