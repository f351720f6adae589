#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "interestflow/errors.hpp"
#include "interestflow/interest.hpp"
#include "interestflow/rng.hpp"

using namespace iflow;

namespace {

BinVector raw_bin(std::vector<std::uint32_t> counts,
                  std::vector<std::int64_t> first_seen = {}) {
  BinVector b;
  b.counts = std::move(counts);
  b.first_seen = first_seen.empty()
                     ? std::vector<std::int64_t>(b.counts.size(), 0)
                     : std::move(first_seen);
  return b;
}

// Independent oracle for Eq. 3: long-double cosine, then degrees.
double ref_angle(const std::vector<std::uint32_t>& a,
                 const std::vector<std::uint32_t>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  const long double c = dot / std::sqrt(na * nb);
  return static_cast<double>(std::acos(c) * 180.0L / 3.14159265358979323846264338327950288L);
}

UserActivitySeries series_of(SubredditPool& pool,
                             const std::vector<const char*>& subs_in_order,
                             std::size_t per_sub) {
  UserActivitySeries s;
  s.author = "u";
  std::int64_t t = 1000;
  for (const char* sub : subs_in_order) {
    const std::uint32_t id = pool.intern(sub);
    for (std::size_t i = 0; i < per_sub; ++i) {
      s.events.push_back({t++, id, 10, EventKind::comment});
    }
  }
  return s;
}

SubredditCatalog sport_food_catalog() {
  SubredditCatalog cat;
  cat.add("soccer", {TopicClass::Sport, true, false});
  cat.add("tennis", {TopicClass::Sport, true, false});
  cat.add("recipes", {TopicClass::FoodHealth, true, false});
  return cat;
}

}  // namespace

TEST_CASE("angle matches the paper's worked examples") {
  CHECK(std::abs(angle_degrees(raw_bin({2, 1, 0}), raw_bin({0, 1, 2})) -
                 78.4630409671) < 0.001);
  CHECK(std::abs(angle_degrees(raw_bin({10, 8}), raw_bin({10, 0})) - 38.6598) <
        0.001);
  CHECK(std::abs(angle_degrees(raw_bin({10, 20}), raw_bin({10, 0})) - 63.4349) <
        0.001);
  CHECK(angle_degrees(raw_bin({3, 4, 5}), raw_bin({3, 4, 5})) ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK(angle_degrees(raw_bin({1, 0}), raw_bin({0, 7})) ==
        doctest::Approx(90.0));
}

TEST_CASE("angle is symmetric, scale-invariant, and bounded on random pairs") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t n = 2 + uniform_below(rng, 12);
    std::vector<std::uint32_t> a(n), b(n);
    bool nza = false, nzb = false;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<std::uint32_t>(uniform_below(rng, 40));
      b[i] = static_cast<std::uint32_t>(uniform_below(rng, 40));
      nza |= a[i] > 0;
      nzb |= b[i] > 0;
    }
    if (!nza) a[0] = 1;
    if (!nzb) b[n - 1] = 1;

    const double ab = angle_degrees(raw_bin(a), raw_bin(b));
    CHECK(ab >= 0.0);
    CHECK(ab <= 90.0);
    CHECK(ab == angle_degrees(raw_bin(b), raw_bin(a)));
    CHECK(std::abs(ab - ref_angle(a, b)) < 1e-9);

    std::vector<std::uint32_t> a9 = a;
    for (auto& v : a9) v *= 9;
    CHECK(std::abs(angle_degrees(raw_bin(a9), raw_bin(b)) - ab) < 1e-9);
  }
}

TEST_CASE("zero vectors and mismatched axes are errors") {
  CHECK_THROWS_AS(angle_degrees(raw_bin({0, 0}), raw_bin({1, 0})), ZeroVector);
  CHECK_THROWS_AS(angle_degrees(raw_bin({1, 0}), raw_bin({1, 0, 0})),
                  MisalignedSequences);
}

TEST_CASE("bin_comments groups by target size with remainder handling") {
  SubredditPool pool;
  auto sizes = [](const std::vector<std::vector<CommentRef>>& groups) {
    std::vector<std::size_t> out;
    for (const auto& g : groups) out.push_back(g.size());
    return out;
  };

  const UserActivitySeries s100 = series_of(pool, {"soccer"}, 100);
  CHECK(sizes(bin_comments(s100, 20)) ==
        std::vector<std::size_t>{20, 20, 20, 20, 20});

  const UserActivitySeries s105 = series_of(pool, {"soccer"}, 105);
  CHECK(sizes(bin_comments(s105, 20)) ==
        std::vector<std::size_t>{20, 20, 20, 20, 25});

  const UserActivitySeries s15 = series_of(pool, {"soccer"}, 15);
  CHECK(sizes(bin_comments(s15, 20)) == std::vector<std::size_t>{15});

  // exactly half the target stays its own bin
  const UserActivitySeries s30 = series_of(pool, {"soccer"}, 30);
  CHECK(sizes(bin_comments(s30, 20)) == std::vector<std::size_t>{20, 10});

  CHECK_THROWS_AS(bin_comments(s100, 1), InvalidSpec);
  UserActivitySeries posts_only;
  posts_only.author = "p";
  posts_only.events.push_back({1, pool.intern("soccer"), 0, EventKind::post});
  CHECK_THROWS_AS(bin_comments(posts_only, 20), EmptyInput);
}

TEST_CASE("bin order is temporal") {
  SubredditPool pool;
  UserActivitySeries s;
  s.author = "u";
  const std::uint32_t a = pool.intern("soccer");
  const std::uint32_t b = pool.intern("tennis");
  for (int i = 0; i < 4; ++i) s.events.push_back({100 + i, a, 5, EventKind::comment});
  for (int i = 0; i < 4; ++i) s.events.push_back({200 + i, b, 5, EventKind::comment});
  const auto groups = bin_comments(s, 4);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].front().subreddit == a);
  CHECK(groups[1].front().subreddit == b);
  CHECK(groups[0].back().created_utc < groups[1].front().created_utc);
}

TEST_CASE("subreddit axis lists active subreddits in first-appearance order") {
  SubredditPool pool;
  const UserActivitySeries s =
      series_of(pool, {"tennis", "soccer", "tennis"}, 2);
  const InterestAxis axis = subreddit_axis(s, pool);
  REQUIRE(axis.labels.size() == 2);
  CHECK(axis.labels[0] == "tennis");
  CHECK(axis.labels[1] == "soccer");
}

TEST_CASE("topic axis spans all fifteen classes and flags uncataloged") {
  SubredditPool pool;
  const std::uint32_t soccer = pool.intern("soccer");
  const std::uint32_t wild = pool.intern("wild");
  const SubredditCatalog cat = sport_food_catalog();
  const InterestAxis axis = topic_axis(pool, cat);
  CHECK(axis.labels.size() == kTopicClassCount);
  CHECK(axis.labels[0] == "Sport");
  CHECK(axis.pool_to_axis[soccer] == 0);
  CHECK(axis.pool_to_axis[wild] == -1);
}

TEST_CASE("bin_vector accumulates counts, first_seen, and span") {
  SubredditPool pool;
  const std::uint32_t a = pool.intern("soccer");
  const std::uint32_t b = pool.intern("tennis");
  std::vector<CommentRef> group = {{100, a}, {150, b}, {200, a}};
  InterestAxis axis;
  axis.level = Level::subreddit;
  axis.labels = {"soccer", "tennis"};
  axis.pool_to_axis = {0, 1};
  const BinVector bin = bin_vector(group, axis, 3);
  CHECK(bin.counts == std::vector<std::uint32_t>{2, 1});
  CHECK(bin.first_seen == std::vector<std::int64_t>{100, 150});
  CHECK(bin.bin_index == 3);
  CHECK(bin.span_begin == 100);
  CHECK(bin.span_end == 200);

  InterestAxis missing = axis;
  missing.pool_to_axis = {0, -1};
  CHECK_THROWS_AS(bin_vector(group, missing, 0), UncatalogedSubreddit);
}

TEST_CASE("dominant element prefers count, then first_seen, then axis order") {
  CHECK(dominant_element(raw_bin({1, 5, 2})) == 1);
  CHECK(dominant_element(raw_bin({3, 3}, {100, 50})) == 1);
  CHECK(dominant_element(raw_bin({3, 3}, {70, 70})) == 0);
  CHECK_THROWS_AS(dominant_element(raw_bin({0, 0})), ZeroVector);
}

TEST_CASE("analyze_user_interest detects a drift then a shift") {
  SubredditPool pool;
  const SubredditCatalog cat = sport_food_catalog();
  const UserActivitySeries s =
      series_of(pool, {"soccer", "tennis", "recipes"}, 20);
  const UserInterestResult result = analyze_user_interest(s, pool, cat);
  CHECK(result.n_bins == 3);
  REQUIRE(result.events.size() == 2);

  const InterestEvent& drift = result.events[0];
  CHECK(drift.kind == InterestKind::drift);
  CHECK(drift.from == "soccer");
  CHECK(drift.to == "tennis");
  CHECK(drift.at_bin == 1);
  CHECK(drift.angle == doctest::Approx(90.0));

  const InterestEvent& shift = result.events[1];
  CHECK(shift.kind == InterestKind::shift);
  CHECK(shift.from == "Sport");
  CHECK(shift.to == "FoodHealth");
  CHECK(shift.at_bin == 2);
}

TEST_CASE("a topic change is never reported as a drift") {
  SubredditPool pool;
  const SubredditCatalog cat = sport_food_catalog();
  // subreddit changes AND topic changes at the same transition
  const UserActivitySeries s = series_of(pool, {"soccer", "recipes"}, 20);
  const UserInterestResult result = analyze_user_interest(s, pool, cat);
  REQUIRE(result.events.size() == 1);
  CHECK(result.events[0].kind == InterestKind::shift);
}

TEST_CASE("no events below the threshold; at most B-1 events") {
  SubredditPool pool;
  const SubredditCatalog cat = sport_food_catalog();
  const UserActivitySeries steady = series_of(pool, {"soccer"}, 100);
  const UserInterestResult calm = analyze_user_interest(steady, pool, cat);
  CHECK(calm.n_bins == 5);
  CHECK(calm.events.empty());

  // threshold 90 can never be strictly exceeded
  const UserActivitySeries wild =
      series_of(pool, {"soccer", "recipes", "tennis", "soccer"}, 20);
  const UserInterestResult none =
      analyze_user_interest(wild, pool, cat, 20, 90.0);
  CHECK(none.events.empty());
  const UserInterestResult all =
      analyze_user_interest(wild, pool, cat, 20, 45.0);
  CHECK(all.events.size() <= all.n_bins - 1);
  CHECK(all.events.size() == 3);
}

TEST_CASE("single-bin users produce no events") {
  SubredditPool pool;
  const SubredditCatalog cat = sport_food_catalog();
  const UserActivitySeries s = series_of(pool, {"soccer"}, 15);
  const UserInterestResult result = analyze_user_interest(s, pool, cat);
  CHECK(result.n_bins == 1);
  CHECK(result.events.empty());
}

TEST_CASE("uncataloged comments surface as UncatalogedSubreddit") {
  SubredditPool pool;
  const SubredditCatalog cat = sport_food_catalog();
  const UserActivitySeries s = series_of(pool, {"soccer", "wild"}, 20);
  CHECK_THROWS_AS(analyze_user_interest(s, pool, cat), UncatalogedSubreddit);
}

TEST_CASE("select_active_users needs strictly more than threshold in one sub") {
  std::vector<CommentRecord> comments;
  for (int i = 0; i < 61; ++i) comments.push_back({"deep", "soccer", i, 1, "c", "p"});
  for (int i = 0; i < 60; ++i) comments.push_back({"edge", "soccer", i, 1, "c", "p"});
  for (int i = 0; i < 50; ++i) comments.push_back({"wide", "soccer", i, 1, "c", "p"});
  for (int i = 0; i < 50; ++i) comments.push_back({"wide", "tennis", i, 1, "c", "p"});
  const UserIndex index = build_user_index(comments);

  const auto per_sub = select_active_users(index, 60);
  REQUIRE(per_sub.size() == 1);
  CHECK(per_sub[0] == "deep");

  const auto per_total = select_active_users(index, 60, true);
  REQUIRE(per_total.size() == 2);
  CHECK(std::find(per_total.begin(), per_total.end(), "wide") !=
        per_total.end());
}

TEST_CASE("transition matrix orders labels by involvement") {
  std::vector<InterestEvent> events;
  events.push_back({InterestKind::drift, "a", "b", 1, 90.0});
  events.push_back({InterestKind::drift, "b", "c", 2, 90.0});
  events.push_back({InterestKind::drift, "c", "b", 3, 90.0});
  events.push_back({InterestKind::shift, "Sport", "FoodHealth", 1, 90.0});

  const TransitionMatrix m = transition_matrix(events, Level::subreddit);
  REQUIRE(m.labels.size() == 3);
  CHECK(m.labels[0] == "b");  // involvement 3
  CHECK(m.labels[1] == "c");  // involvement 2
  CHECK(m.labels[2] == "a");  // involvement 1
  CHECK(m.total() == 3);
  CHECK(m.counts[1][0] == 1);  // c -> b
  CHECK(m.counts[2][0] == 1);  // a -> b

  const TransitionMatrix t = transition_matrix(events, Level::topic);
  REQUIRE(t.labels.size() == 2);
  CHECK(t.total() == 1);
}

TEST_CASE("event count distributions represent zero-event users") {
  std::vector<UserEvents> users(3);
  users[0].author = "quiet";
  users[1].author = "drifty";
  users[1].events.push_back({InterestKind::drift, "a", "b", 1, 90.0});
  users[1].events.push_back({InterestKind::drift, "b", "a", 2, 90.0});
  users[2].author = "shifty";
  users[2].events.push_back({InterestKind::shift, "Sport", "FoodHealth", 1, 90.0});

  const EventCountSummary summary = event_count_distributions(users);
  CHECK(summary.shift_user_fraction == doctest::Approx(1.0 / 3.0));
  CHECK(summary.drifts.total() == doctest::Approx(3.0));
  CHECK(summary.shifts.total() == doctest::Approx(3.0));
  // all-zero drift counts for two users: mass 2 in the first bin
  CHECK(summary.drifts.counts[0] == doctest::Approx(2.0));
  CHECK(summary.shifts.counts[0] == doctest::Approx(2.0));

  const EventCountSummary none = event_count_distributions({});
  CHECK(none.shift_user_fraction == 0.0);
}
