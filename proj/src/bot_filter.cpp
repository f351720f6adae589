#include "interestflow/bot_filter.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "interestflow/errors.hpp"

namespace iflow {

EntropyReport length_entropy(std::string author,
                             std::span<const std::uint32_t> lengths) {
  if (lengths.empty()) throw EmptyInput("no comment lengths for entropy");
  std::map<std::uint32_t, std::size_t> freq;
  for (std::uint32_t len : lengths) ++freq[len];
  const double n = static_cast<double>(lengths.size());
  double bits = 0.0;
  for (const auto& [len, count] : freq) {
    const double p = static_cast<double>(count) / n;
    bits -= p * std::log2(p);
  }
  EntropyReport report;
  report.author = std::move(author);
  report.entropy_bits = std::max(bits, 0.0);
  report.n_comments = lengths.size();
  report.distinct_lengths = freq.size();
  return report;
}

bool name_pattern(std::string_view author) {
  std::string lower(author);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return lower.find("bot") != std::string::npos ||
         lower.find("auto") != std::string::npos;
}

bool high_activity(const UserActivitySeries& series, TimeWindow window) {
  const double window_days =
      static_cast<double>(window.t1 - window.t0) / 86400.0;
  const double threshold = 1e4 * window_days / 210.0;
  return static_cast<double>(series.comment_count()) > threshold;
}

std::string BotFlag::reasons_string() const {
  std::string out;
  auto append = [&](std::string_view reason) {
    if (!out.empty()) out += '|';
    out += reason;
  };
  if (low_entropy) append("low_entropy");
  if (high_activity) append("high_activity");
  if (name_pattern) append("name_pattern");
  return out;
}

double percentile_value(std::vector<double> values, double percentile) {
  if (values.empty()) throw EmptyPopulation("percentile of an empty population");
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw ConfigError("percentile must lie in (0, 100)");
  }
  std::sort(values.begin(), values.end());
  const double rank = percentile / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<BotFlag> flag_automated(std::span<const EntropyReport> reports,
                                    const UserIndex& index, TimeWindow window,
                                    const BotFilterOptions& options) {
  if (reports.empty()) throw EmptyPopulation("no entropy reports to flag");
  std::vector<double> eligible;
  for (const auto& r : reports) {
    if (r.n_comments >= options.min_comments_for_entropy) {
      eligible.push_back(r.entropy_bits);
    }
  }
  double threshold = 0.0;
  const bool have_population = !eligible.empty();
  if (have_population) {
    threshold = percentile_value(std::move(eligible), options.percentile);
  }

  std::vector<BotFlag> flags;
  flags.reserve(reports.size());
  for (const auto& r : reports) {
    BotFlag flag;
    flag.author = r.author;
    flag.low_entropy = have_population &&
                       r.n_comments >= options.min_comments_for_entropy &&
                       r.entropy_bits < threshold;
    flag.name_pattern = iflow::name_pattern(r.author);
    const UserActivitySeries* series = index.find(r.author);
    flag.high_activity = series != nullptr && iflow::high_activity(*series, window);
    flag.flagged = flag.low_entropy || flag.high_activity || flag.name_pattern;
    flags.push_back(std::move(flag));
  }
  return flags;
}

}  // namespace iflow
