#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interestflow/catalog.hpp"
#include "interestflow/ingest.hpp"

namespace iflow {

// Per-user comment counts over the cataloged subreddit axis.
struct ActivityVector {
  std::vector<std::uint32_t> counts;
  std::uint64_t total = 0;  // I_u
  std::size_t dimension() const { return counts.size(); }
};

ActivityVector make_activity_vector(std::vector<std::uint32_t> counts);

// Maps interned pool ids onto the catalog's included-subreddit axis
// (catalog file order); -1 marks subreddits off the axis.
struct CatalogAxis {
  std::vector<std::int32_t> pool_to_axis;
  std::size_t dimension = 0;
  static CatalogAxis build(const SubredditCatalog& catalog,
                           const SubredditPool& pool);
};

ActivityVector activity_vector(const UserActivitySeries& series,
                               const CatalogAxis& axis);

// Mean-absolute-difference Gini over subreddit counts, computed with the
// sorted O(N log N) identity. Throws ZeroActivity when total = 0.
double gini(const ActivityVector& v);

enum class GiniMode { corrected, paper_literal };
std::string_view to_string(GiniMode mode);
GiniMode gini_mode_from_string(std::string_view name);

struct GiniResult {
  double raw = 0.0;
  double normalized = 0.0;
  double g_star = 0.0;
  GiniMode mode = GiniMode::corrected;
};

// Sparse normalization (g - g*)/(1 - g*). paper_literal uses
// g* = (N-I)/I for I < N and throws DegenerateNormalization when that
// denominator vanishes or flips sign (I <= N/2). corrected uses the exact
// integer-allocation floor of the Gini, r(N-r)/(N*I) with r = I mod N, which
// equals (N-I)/N for I < N and keeps the result in [0, 1] for every I.
GiniResult normalized_gini(const ActivityVector& v, GiniMode mode);

// I interactions dropped independently and uniformly over N slots.
ActivityVector null_model(std::uint64_t total, std::size_t dimension,
                          std::mt19937_64& rng);

struct UserVector {
  std::string author;
  ActivityVector vec;
};

struct GiniCurveOptions {
  GiniMode mode = GiniMode::corrected;
  std::uint64_t seed = 0;
  int null_reps = 1;
  int bins_per_decade = 5;
};

// Fig. 3-style curves over logarithmic activity bins. Per-bin statistics are
// NaN where the bin holds no users; n_users records occupancy.
struct ActivityBinCurve {
  std::vector<double> bin_edges;
  std::vector<std::size_t> n_users;
  std::vector<double> mean_subreddits;
  std::vector<double> median_subreddits;
  std::vector<double> mean_gini;
  std::vector<double> null_mean_gini;
  std::size_t size() const { return n_users.size(); }
};

ActivityBinCurve gini_vs_activity(std::span<const UserVector> users,
                                  const GiniCurveOptions& options = {});

}  // namespace iflow
