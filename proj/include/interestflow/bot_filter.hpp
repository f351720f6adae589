#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interestflow/ingest.hpp"

namespace iflow {

struct EntropyReport {
  std::string author;
  double entropy_bits = 0.0;
  std::size_t n_comments = 0;
  std::size_t distinct_lengths = 0;
};

// Shannon entropy of the empirical distribution over exact comment lengths.
EntropyReport length_entropy(std::string author,
                             std::span<const std::uint32_t> lengths);

// True iff the lowercase author name contains "bot" or "auto".
bool name_pattern(std::string_view author);

// True iff the comment rate exceeds 10^4 comments per 210 days, scaled to the
// observation window; strictly "higher than".
bool high_activity(const UserActivitySeries& series, TimeWindow window);

struct BotFlag {
  std::string author;
  bool flagged = false;
  bool low_entropy = false;
  bool high_activity = false;
  bool name_pattern = false;
  std::string reasons_string() const;  // "low_entropy|high_activity|name_pattern"
};

struct BotFilterOptions {
  double percentile = 0.5;                    // entropy percentile cut
  std::size_t min_comments_for_entropy = 10;  // eligibility floor
};

// Linear-interpolation percentile over the values; monotone in `percentile`.
double percentile_value(std::vector<double> values, double percentile);

// low_entropy iff strictly below the population percentile; the population is
// the reports meeting the comment floor. Flags come back in report order.
std::vector<BotFlag> flag_automated(std::span<const EntropyReport> reports,
                                    const UserIndex& index, TimeWindow window,
                                    const BotFilterOptions& options = {});

}  // namespace iflow
