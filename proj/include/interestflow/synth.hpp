#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "interestflow/catalog.hpp"
#include "interestflow/interest.hpp"

namespace iflow {

// A planted dominant-subreddit switch at a bin boundary. `from`/`to` name
// subreddits; for a shift they must belong to different topic classes, for a
// drift to the same one. The ledger records drift endpoints as subreddits and
// shift endpoints as their topics, matching what detection reports.
struct PlantedEvent {
  std::string author;
  std::size_t at_bin = 0;  // bin index where the new interest begins
  InterestKind kind = InterestKind::drift;
  std::string from;
  std::string to;
};

struct PlantedBot {
  std::string author;
  std::uint32_t fixed_length = 100;
  std::size_t n_comments = 20000;
};

// Background users are named u000000.. and draw their comment totals from a
// discrete power law; planted-event users get exactly bins*bin_size comments
// with segment-constant subreddits; bot authors are extra accounts.
struct SynthSpec {
  std::size_t n_users = 100;
  std::size_t n_subreddits = 45;
  double activity_exponent = -1.5;
  std::uint32_t min_comments_per_user = 2;
  std::uint32_t max_comments_per_user = 2000;
  double background_concentration = 1.0;  // share of comments on the home subreddit
  std::size_t posts_per_subreddit = 5;
  std::size_t bin_size = 20;
  std::int64_t from_utc = 1527811200;  // 2018-06-01 00:00:00Z
  std::int64_t to_utc = 1546300799;    // 2018-12-31 23:59:59Z
  std::uint64_t seed = 1;
  std::vector<PlantedEvent> planted_events;
  std::vector<PlantedBot> planted_bots;
};

std::string synth_user_name(std::size_t idx);
std::string synth_subreddit_name(std::size_t idx);
TopicClass synth_topic_of(std::size_t sub_idx);  // round-robin over Table 1

// Fill the spec with chained planted events on the first `n_event_users`
// users (first event at bin 4 so every planted user clears the 60-comment
// selection) plus fixed-length bot accounts.
void auto_plant(SynthSpec& spec, std::size_t n_event_users,
                std::size_t events_per_user, std::size_t n_bots,
                std::size_t bot_comments = 20000, std::uint32_t bot_length = 100);

// Raises n_users until the expected record count (background comments drawn
// from the power law, planted comments, bot comments, posts) reaches target.
void scale_to_target_records(SynthSpec& spec, std::size_t target);

struct SynthResult {
  std::string comments_path;
  std::string posts_path;
  std::string catalog_path;
  std::string events_ledger_path;
  std::string bots_ledger_path;
  std::string spec_path;
  std::size_t n_comment_records = 0;
  std::size_t n_post_records = 0;
};

// Writes comments.ndjson, posts.ndjson, catalog.csv, ledger_events.csv,
// ledger_bots.csv and synth_spec.txt into out_dir. Bit-reproducible per seed.
SynthResult generate_corpus(const SynthSpec& spec, const std::string& out_dir);

}  // namespace iflow
