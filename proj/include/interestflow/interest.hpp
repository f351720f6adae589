#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "interestflow/catalog.hpp"
#include "interestflow/histogram.hpp"
#include "interestflow/ingest.hpp"

namespace iflow {

enum class Level { subreddit, topic };
std::string_view to_string(Level level);

// Axis for a user's bin vectors. At subreddit level the elements are the
// user's own active subreddits in first-appearance order; at topic level the
// 15 catalog classes. pool_to_axis maps interned subreddit ids; -1 = absent
// (uncataloged, at topic level).
struct InterestAxis {
  Level level = Level::subreddit;
  std::vector<std::string> labels;
  std::vector<std::int32_t> pool_to_axis;
};

InterestAxis subreddit_axis(const UserActivitySeries& series,
                            const SubredditPool& pool);
InterestAxis topic_axis(const SubredditPool& pool,
                        const SubredditCatalog& catalog);

struct CommentRef {
  std::int64_t created_utc = 0;
  std::uint32_t subreddit = 0;
};

// Temporally ordered groups of ~target_size comments; a trailing remainder
// smaller than half the target merges into the previous group.
std::vector<std::vector<CommentRef>> bin_comments(const UserActivitySeries& series,
                                                  std::size_t target_size);

struct BinVector {
  std::vector<std::uint32_t> counts;     // per axis element
  std::vector<std::int64_t> first_seen;  // first comment timestamp per element
  std::size_t bin_index = 0;
  std::int64_t span_begin = 0;
  std::int64_t span_end = 0;
};

BinVector bin_vector(std::span<const CommentRef> group, const InterestAxis& axis,
                     std::size_t bin_index);

// arccos of the cosine similarity (Eq.-3 style), in degrees, clamped into
// [0, 90] for nonnegative vectors.
double angle_degrees(const BinVector& a, const BinVector& b);

struct AngleSequence {
  std::vector<double> angles;  // size B-1
  Level level = Level::subreddit;
};

AngleSequence angle_sequence(std::span<const BinVector> bins, Level level);

// Axis position of the maximal count; ties break by earliest first-seen
// timestamp, then by axis order.
std::size_t dominant_element(const BinVector& bin);

enum class InterestKind { drift, shift };
std::string_view to_string(InterestKind kind);

struct InterestEvent {
  InterestKind kind = InterestKind::drift;
  std::string from;
  std::string to;
  std::size_t at_bin = 0;  // index of the bin after the transition
  double angle = 0.0;
};

// One event at most per transition; a topic angle above threshold wins over
// the subreddit angle (a topic change is by definition not a drift).
std::vector<InterestEvent> detect_events(const AngleSequence& sub_angles,
                                         const AngleSequence& topic_angles,
                                         std::span<const BinVector> sub_bins,
                                         std::span<const BinVector> topic_bins,
                                         const InterestAxis& sub_axis,
                                         const InterestAxis& topic_axis,
                                         double threshold_deg = 45.0);

// Authors with strictly more than `threshold` comments in one subreddit
// (or in total, when per_user_total is set).
std::vector<std::string> select_active_users(const UserIndex& index,
                                             std::size_t threshold = 60,
                                             bool per_user_total = false);

struct TransitionMatrix {
  std::vector<std::string> labels;  // descending involvement, ties lexicographic
  std::vector<std::vector<std::uint64_t>> counts;
  Level level = Level::subreddit;
  std::uint64_t total() const;
};

TransitionMatrix transition_matrix(std::span<const InterestEvent> events,
                                   Level level);

struct UserEvents {
  std::string author;
  std::vector<InterestEvent> events;
};

struct EventCountSummary {
  Histogram drifts;  // per-user drift counts, unit bins
  Histogram shifts;
  double shift_user_fraction = 0.0;
};

EventCountSummary event_count_distributions(std::span<const UserEvents> users);

// Full per-user run: bin, encode at both levels, measure angles, detect.
// Returns no events when the user has fewer than two bins.
struct UserInterestResult {
  std::vector<InterestEvent> events;
  std::size_t n_bins = 0;
};

UserInterestResult analyze_user_interest(const UserActivitySeries& series,
                                         const SubredditPool& pool,
                                         const SubredditCatalog& catalog,
                                         std::size_t bin_size = 20,
                                         double threshold_deg = 45.0);

// Same, with a topic axis prebuilt once for the whole population.
UserInterestResult analyze_user_interest(const UserActivitySeries& series,
                                         const SubredditPool& pool,
                                         const InterestAxis& shared_topic_axis,
                                         std::size_t bin_size = 20,
                                         double threshold_deg = 45.0);

}  // namespace iflow
