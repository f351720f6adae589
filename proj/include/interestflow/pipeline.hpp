#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "interestflow/concentration.hpp"
#include "interestflow/ingest.hpp"

namespace iflow {

struct RunConfig {
  std::vector<std::string> comments;
  std::vector<std::string> posts;
  std::string catalog;
  std::string output_dir = "out";
  std::optional<std::int64_t> from_utc;
  std::optional<std::int64_t> to_utc;
  std::size_t bin_size = 20;
  double threshold_deg = 45.0;
  std::size_t min_comments = 60;  // interest selection, strictly greater
  GiniMode gini_mode = GiniMode::corrected;
  std::uint64_t seed = 0;
  int null_reps = 1;
  double bot_percentile = 0.5;
  std::size_t bot_min_comments = 10;
  bool exclude_bots = false;
  int threads = 1;
  bool force = false;
};

// Flat key=value file; '#' starts a comment; `comments`/`posts` may repeat.
RunConfig load_run_config(const std::string& path);
void apply_config_entry(RunConfig& config, std::string_view key,
                        std::string_view value);

// "YYYY-MM-DD" -> epoch seconds at UTC midnight.
std::int64_t parse_utc_date(std::string_view iso);

struct RunSummary {
  IngestCounters comments;
  IngestCounters posts;
  std::uint64_t comment_digest = 0;
  std::uint64_t post_digest = 0;
  std::size_t n_users = 0;
  std::size_t n_subreddits = 0;
  std::size_t n_selected = 0;
  std::size_t n_flagged = 0;
  std::size_t n_excluded = 0;
  std::size_t n_drifts = 0;
  std::size_t n_shifts = 0;
  double shift_user_fraction = 0.0;
  std::vector<std::string> outputs;  // files written, in write order
};

namespace stages {
inline constexpr unsigned kStats = 1u << 0;
inline constexpr unsigned kGini = 1u << 1;
inline constexpr unsigned kInterest = 1u << 2;
inline constexpr unsigned kBots = 1u << 3;
inline constexpr unsigned kAll = kStats | kGini | kInterest | kBots;
}  // namespace stages

// ingest -> bots -> stats -> gini -> interest; writes the analysis tables for
// the requested stages into output_dir, plus manifest.txt on a full run.
// Errors carry a "[stage]" prefix. A zero mask ingests only.
RunSummary run_pipeline(const RunConfig& config, unsigned stage_mask = stages::kAll);

}  // namespace iflow
