#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "interestflow/histogram.hpp"
#include "interestflow/ingest.hpp"

namespace iflow {

struct Lifetime {
  std::int64_t duration = 0;  // seconds
};

// Temporal distance between the first and last comment of a thread.
Lifetime post_lifetime(std::span<const std::int64_t> timestamps);

// Temporal distance between a user's first and last comment, optionally
// restricted to one subreddit. Posts never extend lifetimes.
Lifetime user_lifetime(const UserActivitySeries& series,
                       std::optional<std::uint32_t> subreddit = std::nullopt);

enum class ActivityMeasure {
  posts_per_author,
  comments_per_author,
  subreddits_posted_per_author,
  subreddits_commented_per_author,
  posts_per_subreddit,
  comments_per_subreddit,
};

std::string_view to_string(ActivityMeasure measure);
ActivityMeasure activity_measure_from_string(std::string_view name);

// One value per entity (author or subreddit); zero-activity entities keep
// their zeros here and drop out of logarithmic histograms downstream.
std::vector<double> activity_counts(const UserIndex& index,
                                    ActivityMeasure measure);

Histogram activity_distribution(const UserIndex& index, ActivityMeasure measure,
                                int bins_per_decade = 10);

// Per-subreddit mean lifetimes in days, one value per subreddit that has any
// commenting users (resp. any threads). `exclude` drops those authors.
std::vector<double> mean_user_lifetimes_days(
    const UserIndex& index,
    const std::unordered_set<std::string>* exclude = nullptr);
std::vector<double> mean_post_lifetimes_days(const PostIndex& posts);

}  // namespace iflow
