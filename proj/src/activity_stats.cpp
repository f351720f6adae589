#include "interestflow/activity_stats.hpp"

#include <algorithm>
#include <unordered_set>

#include "interestflow/errors.hpp"

namespace iflow {

Lifetime post_lifetime(std::span<const std::int64_t> timestamps) {
  if (timestamps.empty()) throw EmptyInput("post has no comments");
  return Lifetime{timestamps.back() - timestamps.front()};
}

Lifetime user_lifetime(const UserActivitySeries& series,
                       std::optional<std::uint32_t> subreddit) {
  std::int64_t first = 0, last = 0;
  bool seen = false;
  for (const Event& e : series.events) {
    if (e.kind != EventKind::comment) continue;
    if (subreddit && e.subreddit != *subreddit) continue;
    if (!seen) {
      first = last = e.created_utc;
      seen = true;
    } else {
      first = std::min(first, e.created_utc);
      last = std::max(last, e.created_utc);
    }
  }
  if (!seen) throw EmptyInput("no comments in scope for user lifetime");
  return Lifetime{last - first};
}

std::string_view to_string(ActivityMeasure measure) {
  switch (measure) {
    case ActivityMeasure::posts_per_author:
      return "posts_per_author";
    case ActivityMeasure::comments_per_author:
      return "comments_per_author";
    case ActivityMeasure::subreddits_posted_per_author:
      return "subreddits_posted_per_author";
    case ActivityMeasure::subreddits_commented_per_author:
      return "subreddits_commented_per_author";
    case ActivityMeasure::posts_per_subreddit:
      return "posts_per_subreddit";
    case ActivityMeasure::comments_per_subreddit:
      return "comments_per_subreddit";
  }
  return "unknown";
}

ActivityMeasure activity_measure_from_string(std::string_view name) {
  for (auto m : {ActivityMeasure::posts_per_author,
                 ActivityMeasure::comments_per_author,
                 ActivityMeasure::subreddits_posted_per_author,
                 ActivityMeasure::subreddits_commented_per_author,
                 ActivityMeasure::posts_per_subreddit,
                 ActivityMeasure::comments_per_subreddit}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown activity measure: " + std::string(name));
}

namespace {

std::vector<double> per_author(const UserIndex& index, EventKind kind,
                               bool distinct_subreddits) {
  std::vector<double> out;
  out.reserve(index.users.size());
  std::unordered_set<std::uint32_t> seen;
  for (const auto& user : index.users) {
    if (distinct_subreddits) {
      seen.clear();
      for (const Event& e : user.events)
        if (e.kind == kind) seen.insert(e.subreddit);
      out.push_back(static_cast<double>(seen.size()));
    } else {
      std::size_t n = 0;
      for (const Event& e : user.events) n += e.kind == kind;
      out.push_back(static_cast<double>(n));
    }
  }
  return out;
}

std::vector<double> per_subreddit(const UserIndex& index, EventKind kind) {
  std::vector<double> out(index.subreddits.size(), 0.0);
  for (const auto& user : index.users) {
    for (const Event& e : user.events)
      if (e.kind == kind) out[e.subreddit] += 1.0;
  }
  return out;
}

}  // namespace

std::vector<double> activity_counts(const UserIndex& index,
                                    ActivityMeasure measure) {
  switch (measure) {
    case ActivityMeasure::posts_per_author:
      return per_author(index, EventKind::post, false);
    case ActivityMeasure::comments_per_author:
      return per_author(index, EventKind::comment, false);
    case ActivityMeasure::subreddits_posted_per_author:
      return per_author(index, EventKind::post, true);
    case ActivityMeasure::subreddits_commented_per_author:
      return per_author(index, EventKind::comment, true);
    case ActivityMeasure::posts_per_subreddit:
      return per_subreddit(index, EventKind::post);
    case ActivityMeasure::comments_per_subreddit:
      return per_subreddit(index, EventKind::comment);
  }
  return {};
}

Histogram activity_distribution(const UserIndex& index, ActivityMeasure measure,
                                int bins_per_decade) {
  const auto counts = activity_counts(index, measure);
  return make_log_histogram(counts, bins_per_decade);
}

std::vector<double> mean_user_lifetimes_days(
    const UserIndex& index, const std::unordered_set<std::string>* exclude) {
  // sum of per-user lifetimes and user tally, per subreddit
  std::vector<double> sums(index.subreddits.size(), 0.0);
  std::vector<std::size_t> tallies(index.subreddits.size(), 0);
  std::vector<std::int64_t> first(index.subreddits.size());
  std::vector<std::int64_t> last(index.subreddits.size());
  std::vector<bool> seen(index.subreddits.size());
  for (const auto& user : index.users) {
    if (exclude != nullptr && exclude->contains(user.author)) continue;
    std::fill(seen.begin(), seen.end(), false);
    for (const Event& e : user.events) {
      if (e.kind != EventKind::comment) continue;
      if (!seen[e.subreddit]) {
        seen[e.subreddit] = true;
        first[e.subreddit] = last[e.subreddit] = e.created_utc;
      } else {
        first[e.subreddit] = std::min(first[e.subreddit], e.created_utc);
        last[e.subreddit] = std::max(last[e.subreddit], e.created_utc);
      }
    }
    for (std::size_t s = 0; s < seen.size(); ++s) {
      if (!seen[s]) continue;
      sums[s] += static_cast<double>(last[s] - first[s]) / 86400.0;
      ++tallies[s];
    }
  }
  std::vector<double> means;
  for (std::size_t s = 0; s < sums.size(); ++s) {
    if (tallies[s] > 0) means.push_back(sums[s] / static_cast<double>(tallies[s]));
  }
  return means;
}

std::vector<double> mean_post_lifetimes_days(const PostIndex& posts) {
  std::vector<double> sums;
  std::vector<std::size_t> tallies;
  for (const auto& [id, thread] : posts) {
    if (thread.subreddit >= sums.size()) {
      sums.resize(thread.subreddit + 1, 0.0);
      tallies.resize(thread.subreddit + 1, 0);
    }
    sums[thread.subreddit] +=
        static_cast<double>(post_lifetime(thread.timestamps).duration) / 86400.0;
    ++tallies[thread.subreddit];
  }
  std::vector<double> means;
  for (std::size_t s = 0; s < sums.size(); ++s) {
    if (tallies[s] > 0) means.push_back(sums[s] / static_cast<double>(tallies[s]));
  }
  return means;
}

}  // namespace iflow
