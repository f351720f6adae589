#include "interestflow/interest.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "interestflow/errors.hpp"

namespace iflow {

std::string_view to_string(Level level) {
  return level == Level::subreddit ? "subreddit" : "topic";
}

std::string_view to_string(InterestKind kind) {
  return kind == InterestKind::drift ? "drift" : "shift";
}

InterestAxis subreddit_axis(const UserActivitySeries& series,
                            const SubredditPool& pool) {
  InterestAxis axis;
  axis.level = Level::subreddit;
  axis.pool_to_axis.assign(pool.size(), -1);
  for (const Event& e : series.events) {
    if (e.kind != EventKind::comment) continue;
    if (axis.pool_to_axis[e.subreddit] >= 0) continue;
    axis.pool_to_axis[e.subreddit] = static_cast<std::int32_t>(axis.labels.size());
    axis.labels.emplace_back(pool.name(e.subreddit));
  }
  return axis;
}

InterestAxis topic_axis(const SubredditPool& pool, const SubredditCatalog& catalog) {
  InterestAxis axis;
  axis.level = Level::topic;
  axis.labels.reserve(kTopicClassCount);
  for (std::size_t t = 0; t < kTopicClassCount; ++t) {
    axis.labels.emplace_back(to_string(static_cast<TopicClass>(t)));
  }
  axis.pool_to_axis.assign(pool.size(), -1);
  for (std::size_t id = 0; id < pool.size(); ++id) {
    const CatalogEntry* entry = catalog.find(pool.name(static_cast<std::uint32_t>(id)));
    if (entry != nullptr) {
      axis.pool_to_axis[id] = static_cast<std::int32_t>(entry->topic_class);
    }
  }
  return axis;
}

std::vector<std::vector<CommentRef>> bin_comments(const UserActivitySeries& series,
                                                  std::size_t target_size) {
  if (target_size < 2) throw InvalidSpec("bin target size must be at least 2");
  std::vector<CommentRef> comments;
  for (const Event& e : series.events) {
    if (e.kind == EventKind::comment) {
      comments.push_back(CommentRef{e.created_utc, e.subreddit});
    }
  }
  if (comments.empty()) throw EmptyInput("user has no comments to bin");

  std::vector<std::vector<CommentRef>> groups;
  for (std::size_t at = 0; at < comments.size(); at += target_size) {
    const std::size_t n = std::min(target_size, comments.size() - at);
    groups.emplace_back(comments.begin() + at, comments.begin() + at + n);
  }
  if (groups.size() > 1 && groups.back().size() * 2 < target_size) {
    auto rest = std::move(groups.back());
    groups.pop_back();
    auto& prev = groups.back();
    prev.insert(prev.end(), rest.begin(), rest.end());
  }
  return groups;
}

BinVector bin_vector(std::span<const CommentRef> group, const InterestAxis& axis,
                     std::size_t bin_index) {
  if (group.empty()) throw EmptyInput("empty comment group");
  BinVector bin;
  bin.counts.assign(axis.labels.size(), 0);
  bin.first_seen.assign(axis.labels.size(), 0);
  bin.bin_index = bin_index;
  bin.span_begin = group.front().created_utc;
  bin.span_end = group.back().created_utc;
  for (const CommentRef& c : group) {
    const std::int32_t idx =
        c.subreddit < axis.pool_to_axis.size() ? axis.pool_to_axis[c.subreddit] : -1;
    if (idx < 0) {
      throw UncatalogedSubreddit("subreddit missing from the " +
                                 std::string(to_string(axis.level)) + " axis");
    }
    auto i = static_cast<std::size_t>(idx);
    if (bin.counts[i] == 0) bin.first_seen[i] = c.created_utc;
    ++bin.counts[i];
  }
  return bin;
}

double angle_degrees(const BinVector& a, const BinVector& b) {
  if (a.counts.size() != b.counts.size()) {
    throw MisalignedSequences("bin vectors live on different axes");
  }
  std::uint64_t dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.counts.size(); ++i) {
    dot += static_cast<std::uint64_t>(a.counts[i]) * b.counts[i];
    na += static_cast<std::uint64_t>(a.counts[i]) * a.counts[i];
    nb += static_cast<std::uint64_t>(b.counts[i]) * b.counts[i];
  }
  if (na == 0 || nb == 0) throw ZeroVector("angle undefined for a zero bin vector");
  const double c = static_cast<double>(dot) /
                   std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  const double clamped = std::clamp(c, -1.0, 1.0);
  constexpr double kRadToDeg = 57.295779513082320876798154814105;
  return std::clamp(std::acos(clamped) * kRadToDeg, 0.0, 90.0);
}

AngleSequence angle_sequence(std::span<const BinVector> bins, Level level) {
  if (bins.size() < 2) throw TooFewBins("angle sequence needs at least 2 bins");
  AngleSequence seq;
  seq.level = level;
  seq.angles.reserve(bins.size() - 1);
  for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
    seq.angles.push_back(angle_degrees(bins[i], bins[i + 1]));
  }
  return seq;
}

std::size_t dominant_element(const BinVector& bin) {
  std::size_t best = bin.counts.size();
  for (std::size_t i = 0; i < bin.counts.size(); ++i) {
    if (bin.counts[i] == 0) continue;
    if (best == bin.counts.size() || bin.counts[i] > bin.counts[best] ||
        (bin.counts[i] == bin.counts[best] &&
         bin.first_seen[i] < bin.first_seen[best])) {
      best = i;
    }
  }
  if (best == bin.counts.size()) throw ZeroVector("dominant element of a zero bin");
  return best;
}

std::vector<InterestEvent> detect_events(const AngleSequence& sub_angles,
                                         const AngleSequence& topic_angles,
                                         std::span<const BinVector> sub_bins,
                                         std::span<const BinVector> topic_bins,
                                         const InterestAxis& sub_axis,
                                         const InterestAxis& topic_axis,
                                         double threshold_deg) {
  const std::size_t transitions = sub_angles.angles.size();
  if (topic_angles.angles.size() != transitions ||
      sub_bins.size() != transitions + 1 || topic_bins.size() != transitions + 1) {
    throw MisalignedSequences("angle sequences and bins disagree on B");
  }
  std::vector<InterestEvent> events;
  for (std::size_t i = 0; i < transitions; ++i) {
    InterestEvent event;
    if (topic_angles.angles[i] > threshold_deg) {
      event.kind = InterestKind::shift;
      event.from = topic_axis.labels[dominant_element(topic_bins[i])];
      event.to = topic_axis.labels[dominant_element(topic_bins[i + 1])];
      event.angle = topic_angles.angles[i];
    } else if (sub_angles.angles[i] > threshold_deg) {
      event.kind = InterestKind::drift;
      event.from = sub_axis.labels[dominant_element(sub_bins[i])];
      event.to = sub_axis.labels[dominant_element(sub_bins[i + 1])];
      event.angle = sub_angles.angles[i];
    } else {
      continue;
    }
    event.at_bin = i + 1;
    events.push_back(std::move(event));
  }
  return events;
}

std::vector<std::string> select_active_users(const UserIndex& index,
                                             std::size_t threshold,
                                             bool per_user_total) {
  std::vector<std::string> selected;
  std::unordered_map<std::uint32_t, std::size_t> per_sub;
  for (const auto& user : index.users) {
    if (per_user_total) {
      if (user.comment_count() > threshold) selected.push_back(user.author);
      continue;
    }
    per_sub.clear();
    bool in = false;
    for (const Event& e : user.events) {
      if (e.kind != EventKind::comment) continue;
      if (++per_sub[e.subreddit] > threshold) {
        in = true;
        break;
      }
    }
    if (in) selected.push_back(user.author);
  }
  return selected;
}

std::uint64_t TransitionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts)
    for (std::uint64_t c : row) t += c;
  return t;
}

TransitionMatrix transition_matrix(std::span<const InterestEvent> events,
                                   Level level) {
  const InterestKind want =
      level == Level::subreddit ? InterestKind::drift : InterestKind::shift;
  std::unordered_map<std::string, std::uint64_t> involvement;
  for (const auto& e : events) {
    if (e.kind != want) continue;
    ++involvement[e.from];
    ++involvement[e.to];
  }
  TransitionMatrix matrix;
  matrix.level = level;
  matrix.labels.reserve(involvement.size());
  for (const auto& [label, n] : involvement) matrix.labels.push_back(label);
  std::sort(matrix.labels.begin(), matrix.labels.end(),
            [&](const std::string& a, const std::string& b) {
              const auto ia = involvement.at(a), ib = involvement.at(b);
              return ia != ib ? ia > ib : a < b;
            });
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) pos[matrix.labels[i]] = i;
  matrix.counts.assign(matrix.labels.size(),
                       std::vector<std::uint64_t>(matrix.labels.size(), 0));
  for (const auto& e : events) {
    if (e.kind != want) continue;
    ++matrix.counts[pos[e.from]][pos[e.to]];
  }
  return matrix;
}

EventCountSummary event_count_distributions(std::span<const UserEvents> users) {
  std::vector<double> drifts, shifts;
  std::size_t with_shift = 0;
  for (const auto& u : users) {
    std::size_t nd = 0, ns = 0;
    for (const auto& e : u.events) {
      (e.kind == InterestKind::drift ? nd : ns) += 1;
    }
    drifts.push_back(static_cast<double>(nd));
    shifts.push_back(static_cast<double>(ns));
    with_shift += ns > 0;
  }
  EventCountSummary summary;
  summary.drifts = make_linear_histogram(drifts, 1.0);
  summary.shifts = make_linear_histogram(shifts, 1.0);
  summary.shift_user_fraction =
      users.empty() ? 0.0
                    : static_cast<double>(with_shift) / static_cast<double>(users.size());
  return summary;
}

UserInterestResult analyze_user_interest(const UserActivitySeries& series,
                                         const SubredditPool& pool,
                                         const SubredditCatalog& catalog,
                                         std::size_t bin_size,
                                         double threshold_deg) {
  return analyze_user_interest(series, pool, topic_axis(pool, catalog), bin_size,
                               threshold_deg);
}

UserInterestResult analyze_user_interest(const UserActivitySeries& series,
                                         const SubredditPool& pool,
                                         const InterestAxis& shared_topic_axis,
                                         std::size_t bin_size,
                                         double threshold_deg) {
  UserInterestResult result;
  const auto groups = bin_comments(series, bin_size);
  result.n_bins = groups.size();
  if (groups.size() < 2) return result;

  const InterestAxis sub_axis = subreddit_axis(series, pool);
  const InterestAxis& top_axis = shared_topic_axis;
  std::vector<BinVector> sub_bins, topic_bins;
  sub_bins.reserve(groups.size());
  topic_bins.reserve(groups.size());
  for (std::size_t b = 0; b < groups.size(); ++b) {
    sub_bins.push_back(bin_vector(groups[b], sub_axis, b));
    topic_bins.push_back(bin_vector(groups[b], top_axis, b));
  }
  const AngleSequence sub_angles = angle_sequence(sub_bins, Level::subreddit);
  const AngleSequence top_angles = angle_sequence(topic_bins, Level::topic);
  result.events = detect_events(sub_angles, top_angles, sub_bins, topic_bins,
                                sub_axis, top_axis, threshold_deg);
  return result;
}

}  // namespace iflow
