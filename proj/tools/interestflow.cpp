#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "interestflow/errors.hpp"
#include "interestflow/pipeline.hpp"
#include "interestflow/synth.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output;
  bool exclude_bots = false;
  bool force = false;
  CLI::Option* config = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  CLI::Option* output_opt = nullptr;
  CLI::Option* exclude = nullptr;
  CLI::Option* force_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  o.config = cmd->add_option("--config", o.config_path,
                             "Key=value config file; flags override it");
  o.seed_opt = cmd->add_option("--seed", o.seed, "Master RNG seed");
  o.threads_opt = cmd->add_option("--threads", o.threads, "Parser threads");
  o.output_opt = cmd->add_option("--output", o.output, "Output directory");
  o.exclude = cmd->add_flag("--exclude-bots", o.exclude_bots,
                            "Drop flagged accounts from user-level analyses");
  o.force_opt =
      cmd->add_flag("--force", o.force, "Overwrite existing output files");
}

struct InputOpts {
  std::vector<std::string> comments;
  std::vector<std::string> posts;
  std::string catalog;
  std::string from;
  std::string to;
  CLI::Option* comments_opt = nullptr;
  CLI::Option* posts_opt = nullptr;
  CLI::Option* catalog_opt = nullptr;
  CLI::Option* from_opt = nullptr;
  CLI::Option* to_opt = nullptr;
};

void add_inputs(CLI::App* cmd, InputOpts& o) {
  o.comments_opt = cmd->add_option("--comments", o.comments,
                                   "Comment dump file(s), .ndjson or .zst");
  o.posts_opt = cmd->add_option("--posts", o.posts, "Post dump file(s)");
  o.catalog_opt =
      cmd->add_option("--catalog", o.catalog, "Subreddit catalog CSV");
  o.from_opt =
      cmd->add_option("--from", o.from, "Window start, YYYY-MM-DD (UTC)");
  o.to_opt = cmd->add_option("--to", o.to,
                             "Window end, YYYY-MM-DD (UTC, inclusive)");
}

struct AnalysisOpts {
  std::string gini_mode = "corrected";
  int null_reps = 1;
  std::size_t bin_size = 20;
  double threshold_deg = 45.0;
  std::size_t min_comments = 60;
  double percentile = 0.5;
  std::size_t min_entropy_comments = 10;
  CLI::Option* mode = nullptr;
  CLI::Option* null_reps_opt = nullptr;
  CLI::Option* bin_size_opt = nullptr;
  CLI::Option* threshold = nullptr;
  CLI::Option* min_comments_opt = nullptr;
  CLI::Option* percentile_opt = nullptr;
  CLI::Option* min_entropy_opt = nullptr;
};

void add_gini_opts(CLI::App* cmd, AnalysisOpts& o) {
  o.mode = cmd->add_option("--mode", o.gini_mode,
                           "Sparse normalization: corrected or paper-literal");
  o.null_reps_opt = cmd->add_option("--null-reps", o.null_reps,
                                    "Null-model replicates per user");
}

void add_interest_opts(CLI::App* cmd, AnalysisOpts& o) {
  o.bin_size_opt =
      cmd->add_option("--bin-size", o.bin_size, "Comments per activity bin");
  o.threshold = cmd->add_option("--threshold-deg", o.threshold_deg,
                                "Event angle threshold in degrees");
  o.min_comments_opt =
      cmd->add_option("--min-comments", o.min_comments,
                      "Per-subreddit comment floor for user selection");
}

void add_bot_opts(CLI::App* cmd, AnalysisOpts& o) {
  o.percentile_opt = cmd->add_option("--percentile", o.percentile,
                                     "Entropy percentile cutoff");
  o.min_entropy_opt =
      cmd->add_option("--min-comments-for-entropy", o.min_entropy_comments,
                      "Comment floor for the entropy population");
}

iflow::RunConfig make_config(const CommonOpts& c, const InputOpts& in,
                             const AnalysisOpts& an) {
  iflow::RunConfig cfg;
  if (c.config->count() > 0) cfg = iflow::load_run_config(c.config_path);
  if (in.comments_opt->count() > 0) cfg.comments = in.comments;
  if (in.posts_opt->count() > 0) cfg.posts = in.posts;
  if (in.catalog_opt->count() > 0) cfg.catalog = in.catalog;
  if (in.from_opt->count() > 0) cfg.from_utc = iflow::parse_utc_date(in.from);
  if (in.to_opt->count() > 0)
    cfg.to_utc = iflow::parse_utc_date(in.to) + 86399;
  if (c.seed_opt->count() > 0) cfg.seed = c.seed;
  if (c.threads_opt->count() > 0) cfg.threads = c.threads;
  if (c.output_opt->count() > 0) cfg.output_dir = c.output;
  if (c.exclude->count() > 0) cfg.exclude_bots = c.exclude_bots;
  if (c.force_opt->count() > 0) cfg.force = c.force;
  if (an.mode != nullptr && an.mode->count() > 0)
    cfg.gini_mode = iflow::gini_mode_from_string(an.gini_mode);
  if (an.null_reps_opt != nullptr && an.null_reps_opt->count() > 0)
    cfg.null_reps = an.null_reps;
  if (an.bin_size_opt != nullptr && an.bin_size_opt->count() > 0)
    cfg.bin_size = an.bin_size;
  if (an.threshold != nullptr && an.threshold->count() > 0)
    cfg.threshold_deg = an.threshold_deg;
  if (an.min_comments_opt != nullptr && an.min_comments_opt->count() > 0)
    cfg.min_comments = an.min_comments;
  if (an.percentile_opt != nullptr && an.percentile_opt->count() > 0)
    cfg.bot_percentile = an.percentile;
  if (an.min_entropy_opt != nullptr && an.min_entropy_opt->count() > 0)
    cfg.bot_min_comments = an.min_entropy_comments;
  return cfg;
}

void print_summary(const iflow::RunSummary& s) {
  std::printf("comments: read=%llu accepted=%llu skipped=%llu\n",
              static_cast<unsigned long long>(s.comments.read),
              static_cast<unsigned long long>(s.comments.accepted),
              static_cast<unsigned long long>(s.comments.skipped()));
  std::printf("posts: read=%llu accepted=%llu skipped=%llu\n",
              static_cast<unsigned long long>(s.posts.read),
              static_cast<unsigned long long>(s.posts.accepted),
              static_cast<unsigned long long>(s.posts.skipped()));
  std::printf("users=%zu subreddits=%zu selected=%zu flagged=%zu excluded=%zu\n",
              s.n_users, s.n_subreddits, s.n_selected, s.n_flagged,
              s.n_excluded);
  std::printf("drifts=%zu shifts=%zu shift_user_fraction=%g\n", s.n_drifts,
              s.n_shifts, s.shift_user_fraction);
  for (const std::string& path : s.outputs)
    std::printf("wrote %s\n", path.c_str());
}

struct SynthOpts {
  std::size_t users = 100;
  std::size_t subreddits = 45;
  double exponent = -1.5;
  std::uint32_t min_comments = 2;
  std::uint32_t max_comments = 2000;
  double concentration = 1.0;
  std::size_t posts_per_subreddit = 5;
  std::size_t bin_size = 20;
  std::size_t event_users = 0;
  std::size_t events_per_user = 1;
  std::size_t bots = 0;
  std::size_t bot_comments = 20000;
  std::uint32_t bot_length = 100;
  std::size_t target_records = 0;
};

void add_synth_opts(CLI::App* cmd, SynthOpts& o) {
  cmd->add_option("--users", o.users, "Background user count");
  cmd->add_option("--subreddits", o.subreddits, "Subreddit count");
  cmd->add_option("--exponent", o.exponent, "Activity power-law exponent");
  cmd->add_option("--min-comments", o.min_comments,
                  "Minimum comments per background user");
  cmd->add_option("--max-comments", o.max_comments,
                  "Maximum comments per background user");
  cmd->add_option("--concentration", o.concentration,
                  "Share of background comments on the home subreddit");
  cmd->add_option("--posts-per-subreddit", o.posts_per_subreddit,
                  "Posts emitted per subreddit");
  cmd->add_option("--bin-size", o.bin_size, "Comments per planted bin");
  cmd->add_option("--event-users", o.event_users,
                  "Users given planted drift/shift chains");
  cmd->add_option("--events-per-user", o.events_per_user,
                  "Planted events per event user");
  cmd->add_option("--bots", o.bots, "Planted fixed-length bot accounts");
  cmd->add_option("--bot-comments", o.bot_comments, "Comments per bot");
  cmd->add_option("--bot-length", o.bot_length, "Bot comment body length");
  cmd->add_option("--target-records", o.target_records,
                  "Grow the user count until the expected record total");
}

int run_synth(const CommonOpts& common, const SynthOpts& o) {
  iflow::SynthSpec spec;
  spec.n_users = o.users;
  spec.n_subreddits = o.subreddits;
  spec.activity_exponent = o.exponent;
  spec.min_comments_per_user = o.min_comments;
  spec.max_comments_per_user = o.max_comments;
  spec.background_concentration = o.concentration;
  spec.posts_per_subreddit = o.posts_per_subreddit;
  spec.bin_size = o.bin_size;
  if (common.seed_opt->count() > 0) spec.seed = common.seed;
  if (o.event_users > 0 || o.bots > 0)
    iflow::auto_plant(spec, o.event_users, o.events_per_user, o.bots,
                      o.bot_comments, o.bot_length);
  if (o.target_records > 0)
    iflow::scale_to_target_records(spec, o.target_records);
  const std::string out_dir =
      common.output_opt->count() > 0 ? common.output : std::string("synth");
  const iflow::SynthResult result = iflow::generate_corpus(spec, out_dir);
  std::printf("users=%zu comment_records=%zu post_records=%zu\n", spec.n_users,
              result.n_comment_records, result.n_post_records);
  std::printf("wrote %s\n", result.comments_path.c_str());
  std::printf("wrote %s\n", result.posts_path.c_str());
  std::printf("wrote %s\n", result.catalog_path.c_str());
  std::printf("wrote %s\n", result.events_ledger_path.c_str());
  std::printf("wrote %s\n", result.bots_ledger_path.c_str());
  std::printf("wrote %s\n", result.spec_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reddit interest dynamics pipeline"};
  app.require_subcommand(1);

  struct Cmd {
    CLI::App* sub = nullptr;
    CommonOpts common;
    InputOpts inputs;
    AnalysisOpts analysis;
    unsigned mask = 0;
  };
  std::vector<Cmd> cmds(6);
  const char* names[6] = {"ingest", "stats", "gini", "interest", "bots", "run"};
  const char* descs[6] = {"Parse and index dumps, then report counters",
                          "Activity distributions, fits and lifetimes",
                          "Concentration curve with null model",
                          "Drift/shift detection and transition matrices",
                          "Entropy-based automated-account flags",
                          "Full pipeline: every table plus manifest"};
  const unsigned masks[6] = {0,
                             iflow::stages::kStats,
                             iflow::stages::kGini,
                             iflow::stages::kInterest,
                             iflow::stages::kBots,
                             iflow::stages::kAll};
  for (int i = 0; i < 6; ++i) {
    Cmd& c = cmds[i];
    c.sub = app.add_subcommand(names[i], descs[i]);
    c.mask = masks[i];
    add_common(c.sub, c.common);
    add_inputs(c.sub, c.inputs);
    const bool full = c.mask == iflow::stages::kAll;
    if (full || c.mask == iflow::stages::kGini) add_gini_opts(c.sub, c.analysis);
    if (full || c.mask == iflow::stages::kInterest)
      add_interest_opts(c.sub, c.analysis);
    if (full || c.mask == iflow::stages::kBots) add_bot_opts(c.sub, c.analysis);
  }

  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a seeded corpus with ledgers");
  CommonOpts synth_common;
  add_common(synth_cmd, synth_common);
  SynthOpts synth_opts;
  add_synth_opts(synth_cmd, synth_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) return run_synth(synth_common, synth_opts);
    for (const Cmd& c : cmds) {
      if (!c.sub->parsed()) continue;
      const iflow::RunConfig cfg = make_config(c.common, c.inputs, c.analysis);
      print_summary(iflow::run_pipeline(cfg, c.mask));
      return 0;
    }
  } catch (const iflow::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
