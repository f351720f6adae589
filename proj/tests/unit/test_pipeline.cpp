#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "interestflow/errors.hpp"
#include "interestflow/pipeline.hpp"
#include "interestflow/synth.hpp"

using namespace iflow;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("iflow_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::vector<std::string> lines_of(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

SynthResult make_corpus(const std::string& dir_name, std::uint64_t seed = 21) {
  SynthSpec spec;
  spec.n_users = 80;
  spec.n_subreddits = 30;
  spec.max_comments_per_user = 300;
  spec.seed = seed;
  auto_plant(spec, 3, 2, 1, 400, 77);
  return generate_corpus(spec, fresh_dir(dir_name).string());
}

RunConfig config_for(const SynthResult& corpus, const std::string& out_name) {
  RunConfig cfg;
  cfg.comments = {corpus.comments_path};
  cfg.posts = {corpus.posts_path};
  cfg.catalog = corpus.catalog_path;
  cfg.output_dir = fresh_dir(out_name).string();
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("date parsing accepts ISO dates and rejects junk") {
  CHECK(parse_utc_date("2018-06-01") == 1527811200);
  CHECK(parse_utc_date("1970-01-01") == 0);
  CHECK(parse_utc_date("2018-12-31") == 1546214400);
  CHECK_THROWS_AS(parse_utc_date("06/01/2018"), ConfigError);
  CHECK_THROWS_AS(parse_utc_date("2018-13-01"), ConfigError);
  CHECK_THROWS_AS(parse_utc_date("2018-02-30"), ConfigError);
  CHECK_THROWS_AS(parse_utc_date("soon"), ConfigError);
}

TEST_CASE("config files load with overrides and reject unknown keys") {
  const auto dir = fresh_dir("cfg");
  std::filesystem::create_directories(dir);
  const auto path = (dir / "run.cfg").string();
  {
    std::ofstream out(path);
    out << "# pipeline settings\n"
        << "comments = a.ndjson\n"
        << "comments = b.ndjson\n"
        << "posts = p.ndjson\n"
        << "catalog = cat.csv\n"
        << "output_dir = results\n"
        << "from = 2018-06-01\n"
        << "to = 2018-12-31\n"
        << "bin_size = 25\n"
        << "threshold_deg = 50\n"
        << "min_comments = 80\n"
        << "gini_mode = paper-literal\n"
        << "seed = 99\n"
        << "null_reps = 3\n"
        << "bot_percentile = 1.5\n"
        << "bot_min_comments = 12\n"
        << "exclude_bots = true\n"
        << "threads = 2\n"
        << "force = true\n";
  }
  const RunConfig cfg = load_run_config(path);
  CHECK(cfg.comments == std::vector<std::string>{"a.ndjson", "b.ndjson"});
  CHECK(cfg.posts == std::vector<std::string>{"p.ndjson"});
  CHECK(cfg.catalog == "cat.csv");
  CHECK(cfg.output_dir == "results");
  REQUIRE(cfg.from_utc.has_value());
  CHECK(*cfg.from_utc == 1527811200);
  REQUIRE(cfg.to_utc.has_value());
  CHECK(*cfg.to_utc == 1546214400 + 86399);  // inclusive end of day
  CHECK(cfg.bin_size == 25);
  CHECK(cfg.threshold_deg == 50.0);
  CHECK(cfg.min_comments == 80);
  CHECK(cfg.gini_mode == GiniMode::paper_literal);
  CHECK(cfg.seed == 99);
  CHECK(cfg.null_reps == 3);
  CHECK(cfg.bot_percentile == 1.5);
  CHECK(cfg.bot_min_comments == 12);
  CHECK(cfg.exclude_bots);
  CHECK(cfg.threads == 2);
  CHECK(cfg.force);

  RunConfig other;
  CHECK_THROWS_AS(apply_config_entry(other, "no_such_key", "1"), ConfigError);
  {
    std::ofstream out(path, std::ios::app);
    out << "mystery = 1\n";
  }
  CHECK_THROWS_AS(load_run_config(path), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent.cfg"), ConfigError);
}

TEST_CASE("full pipeline writes every table and recovers planted events") {
  const SynthResult corpus = make_corpus("pipe_corpus");
  const RunConfig cfg = config_for(corpus, "pipe_out");
  const RunSummary summary = run_pipeline(cfg);

  for (const char* name :
       {"bots.csv", "gini_curve.csv", "interest_events.csv",
        "transition_drift.csv", "transition_shift.csv",
        "activity_histograms.csv", "activity_fits.csv", "manifest.txt"}) {
    CHECK(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / name));
  }

  CHECK(summary.comments.read ==
        summary.comments.accepted + summary.comments.skipped());
  CHECK(summary.posts.read ==
        summary.posts.accepted + summary.posts.skipped());
  CHECK(summary.comments.accepted > 0);
  CHECK(summary.n_users > 0);
  CHECK(summary.n_subreddits == 30);
  CHECK(summary.n_flagged >= 1);  // the planted bot

  // detected events match the planted ledger exactly (clean corpus)
  const auto ledger = lines_of(corpus.events_ledger_path);
  const auto events = lines_of(
      (std::filesystem::path(cfg.output_dir) / "interest_events.csv").string());
  REQUIRE(events.size() == ledger.size());
  CHECK(events[0] == "author,bin,kind,from,to,angle");
  std::vector<std::string> detected;
  for (std::size_t i = 1; i < events.size(); ++i) {
    const std::string& row = events[i];
    detected.push_back(row.substr(0, row.rfind(',')));
  }
  std::vector<std::string> planted(ledger.begin() + 1, ledger.end());
  std::sort(detected.begin(), detected.end());
  std::sort(planted.begin(), planted.end());
  CHECK(detected == planted);
  CHECK(summary.n_drifts + summary.n_shifts == planted.size());
}

TEST_CASE("pipeline runs are deterministic modulo the manifest timestamp") {
  const SynthResult corpus = make_corpus("pipe_det_corpus");
  const RunConfig cfg_a = config_for(corpus, "pipe_det_a");
  const RunConfig cfg_b = config_for(corpus, "pipe_det_b");
  run_pipeline(cfg_a);
  RunConfig threaded = cfg_b;
  threaded.threads = 3;  // concurrency must not change emitted bytes
  run_pipeline(threaded);

  for (const char* name :
       {"bots.csv", "gini_curve.csv", "interest_events.csv",
        "transition_drift.csv", "transition_shift.csv",
        "activity_histograms.csv", "activity_fits.csv"}) {
    const auto a = lines_of((std::filesystem::path(cfg_a.output_dir) / name).string());
    const auto b = lines_of((std::filesystem::path(cfg_b.output_dir) / name).string());
    CHECK(a == b);
  }
  // generated_at and threads are run metadata; everything else must match
  auto manifest_sans_stamp = [](const std::string& dir) {
    std::vector<std::string> keep;
    for (auto& line : lines_of((std::filesystem::path(dir) / "manifest.txt").string())) {
      if (line.rfind("generated_at=", 0) == 0) continue;
      if (line.rfind("threads=", 0) == 0) continue;
      keep.push_back(line);
    }
    return keep;
  };
  CHECK(manifest_sans_stamp(cfg_a.output_dir) ==
        manifest_sans_stamp(cfg_b.output_dir));
}

TEST_CASE("config validation fails before any computation") {
  const SynthResult corpus = make_corpus("pipe_guard_corpus");
  RunConfig cfg = config_for(corpus, "pipe_guard_out");

  RunConfig no_catalog = cfg;
  no_catalog.catalog = "";
  CHECK_THROWS_AS(run_pipeline(no_catalog), ConfigError);

  RunConfig missing_catalog = cfg;
  missing_catalog.catalog = "/nonexistent/cat.csv";
  CHECK_THROWS_AS(run_pipeline(missing_catalog), ConfigError);

  RunConfig missing_input = cfg;
  missing_input.comments = {"/nonexistent/c.ndjson"};
  CHECK_THROWS_AS(run_pipeline(missing_input), ConfigError);

  RunConfig bad_threshold = cfg;
  bad_threshold.threshold_deg = 90.0;
  CHECK_THROWS_AS(run_pipeline(bad_threshold), ConfigError);

  CHECK(!std::filesystem::exists(
      std::filesystem::path(cfg.output_dir) / "manifest.txt"));

  // overwrite guard: a second full run needs force
  run_pipeline(cfg);
  CHECK_THROWS_AS(run_pipeline(cfg), ConfigError);
  RunConfig forced = cfg;
  forced.force = true;
  CHECK_NOTHROW(run_pipeline(forced));
}

TEST_CASE("stage masks emit only the requested tables") {
  const SynthResult corpus = make_corpus("pipe_mask_corpus");
  RunConfig cfg = config_for(corpus, "pipe_mask_out");
  const RunSummary summary = run_pipeline(cfg, stages::kGini);
  const std::filesystem::path out(cfg.output_dir);
  CHECK(std::filesystem::exists(out / "gini_curve.csv"));
  CHECK(!std::filesystem::exists(out / "bots.csv"));
  CHECK(!std::filesystem::exists(out / "interest_events.csv"));
  CHECK(!std::filesystem::exists(out / "manifest.txt"));
  CHECK(!std::filesystem::exists(out / "activity_histograms.csv"));
  CHECK(summary.outputs.size() == 1);

  const auto head = lines_of((out / "gini_curve.csv").string())[0];
  CHECK(head ==
        "bin_lo,bin_hi,mean_subreddits,median_subreddits,mean_gini,null_mean_gini");

  // outputs must list exactly the files each mask wrote
  RunConfig stats_cfg = config_for(corpus, "pipe_mask_stats");
  const RunSummary stats_summary = run_pipeline(stats_cfg, stages::kStats);
  REQUIRE(stats_summary.outputs.size() == 2);
  for (const std::string& path : stats_summary.outputs) {
    CHECK(std::filesystem::exists(path));
  }
  CHECK(!std::filesystem::exists(
      std::filesystem::path(stats_cfg.output_dir) / "gini_curve.csv"));

  RunConfig ingest_cfg = config_for(corpus, "pipe_mask_ingest");
  const RunSummary ingest_summary = run_pipeline(ingest_cfg, 0);
  CHECK(ingest_summary.outputs.empty());
}

TEST_CASE("exclude_bots removes flagged authors from user-level analyses") {
  SynthSpec spec;
  spec.n_users = 60;
  spec.n_subreddits = 30;
  spec.max_comments_per_user = 300;
  spec.seed = 31;
  // noisy bot: enough comments to clear high-activity in a ~7-month window
  auto_plant(spec, 2, 2, 1, 20000, 55);
  const SynthResult corpus =
      generate_corpus(spec, fresh_dir("pipe_excl_corpus").string());

  RunConfig keep = config_for(corpus, "pipe_excl_keep");
  const RunSummary with_bots = run_pipeline(keep);

  RunConfig drop = config_for(corpus, "pipe_excl_drop");
  drop.exclude_bots = true;
  const RunSummary without = run_pipeline(drop);

  CHECK(without.n_excluded >= 1);
  CHECK(without.n_flagged == with_bots.n_flagged);
  // the bots table itself still reports every account
  const auto bots_rows =
      lines_of((std::filesystem::path(drop.output_dir) / "bots.csv").string());
  CHECK(bots_rows.size() == without.n_users + 1);
}
