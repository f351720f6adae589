#include "interestflow/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <unordered_set>

#include "interestflow/activity_stats.hpp"
#include "interestflow/bot_filter.hpp"
#include "interestflow/errors.hpp"
#include "interestflow/fits.hpp"
#include "interestflow/interest.hpp"
#include "interestflow/rng.hpp"

namespace iflow {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_bool_value(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean value: " + std::string(v));
}

template <typename T>
T parse_number(std::string_view v) {
  T out{};
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("invalid numeric value: " + std::string(v));
  }
  return out;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::int64_t parse_utc_date(std::string_view iso) {
  int y = 0, m = 0, d = 0;
  if (std::sscanf(std::string(iso).c_str(), "%d-%d-%d", &y, &m, &d) != 3) {
    throw ConfigError("expected YYYY-MM-DD date: " + std::string(iso));
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw ConfigError("invalid calendar date: " + std::string(iso));
  const auto days = static_cast<std::chrono::sys_days>(ymd);
  return std::chrono::duration_cast<std::chrono::seconds>(days.time_since_epoch())
      .count();
}

void apply_config_entry(RunConfig& config, std::string_view key,
                        std::string_view value) {
  const std::string v(value);
  if (key == "comments") {
    config.comments.push_back(v);
  } else if (key == "posts") {
    config.posts.push_back(v);
  } else if (key == "catalog") {
    config.catalog = v;
  } else if (key == "output_dir" || key == "output") {
    config.output_dir = v;
  } else if (key == "from") {
    config.from_utc = parse_utc_date(value);
  } else if (key == "to") {
    config.to_utc = parse_utc_date(value) + 86399;  // inclusive end of day
  } else if (key == "from_utc") {
    config.from_utc = parse_number<std::int64_t>(value);
  } else if (key == "to_utc") {
    config.to_utc = parse_number<std::int64_t>(value);
  } else if (key == "bin_size") {
    config.bin_size = parse_number<std::size_t>(value);
  } else if (key == "threshold_deg") {
    config.threshold_deg = std::stod(v);
  } else if (key == "min_comments") {
    config.min_comments = parse_number<std::size_t>(value);
  } else if (key == "gini_mode") {
    config.gini_mode = gini_mode_from_string(value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(value);
  } else if (key == "null_reps") {
    config.null_reps = parse_number<int>(value);
  } else if (key == "bot_percentile") {
    config.bot_percentile = std::stod(v);
  } else if (key == "bot_min_comments") {
    config.bot_min_comments = parse_number<std::size_t>(value);
  } else if (key == "exclude_bots") {
    config.exclude_bots = parse_bool_value(value);
  } else if (key == "threads") {
    config.threads = parse_number<int>(value);
  } else if (key == "force") {
    config.force = parse_bool_value(value);
  } else {
    throw ConfigError("unknown config key: " + std::string(key));
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value");
    }
    try {
      apply_config_entry(config, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    } catch (const Error& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return config;
}

namespace {

std::vector<const char*> output_files(unsigned mask) {
  std::vector<const char*> files;
  if (mask & stages::kBots) files.push_back("bots.csv");
  if (mask & stages::kStats) {
    files.push_back("activity_histograms.csv");
    files.push_back("activity_fits.csv");
  }
  if (mask & stages::kGini) files.push_back("gini_curve.csv");
  if (mask & stages::kInterest) {
    files.push_back("interest_events.csv");
    files.push_back("transition_drift.csv");
    files.push_back("transition_shift.csv");
  }
  if (mask == stages::kAll) files.push_back("manifest.txt");
  return files;
}

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(std::string("[") + name + "] " + e.what());
  }
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::string_view header) : out_(path) {
    if (!out_) throw IoError("cannot open output file: " + path);
    out_ << header << '\n';
  }
  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << fields, first = false), ...);
    out_ << '\n';
  }
  std::ostream& raw() { return out_; }

 private:
  std::ofstream out_;
};

std::uint64_t file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for digest: " + path);
  std::uint64_t h = kFnvOffset;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
  }
  return h;
}

void validate_config(const RunConfig& config) {
  if (config.catalog.empty()) throw ConfigError("catalog path is required");
  if (config.comments.empty()) throw ConfigError("at least one comments input is required");
  if (!std::filesystem::exists(config.catalog)) {
    throw ConfigError("catalog path does not exist: " + config.catalog);
  }
  for (const auto& p : config.comments) {
    if (!std::filesystem::exists(p)) throw ConfigError("comments input missing: " + p);
  }
  for (const auto& p : config.posts) {
    if (!std::filesystem::exists(p)) throw ConfigError("posts input missing: " + p);
  }
  if (!(config.threshold_deg > 0.0 && config.threshold_deg < 90.0)) {
    throw ConfigError("threshold_deg must lie in (0, 90)");
  }
  if (config.bin_size < 2) throw ConfigError("bin_size must be at least 2");
  if (config.null_reps < 1) throw ConfigError("null_reps must be positive");
  if (config.threads < 1) throw ConfigError("threads must be positive");
  if (!(config.bot_percentile > 0.0 && config.bot_percentile < 100.0)) {
    throw ConfigError("bot_percentile must lie in (0, 100)");
  }
  if (config.from_utc && config.to_utc && *config.from_utc > *config.to_utc) {
    throw ConfigError("window is empty: from > to");
  }
}

struct FitRows {
  std::vector<std::array<std::string, 3>> rows;
  void add(std::string_view fit, std::string_view param, std::string value) {
    rows.push_back({std::string(fit), std::string(param), std::move(value)});
  }
  void add(std::string_view fit, std::string_view param, double value) {
    add(fit, param, fmt_double(value));
  }
  template <typename F>
  void tolerant(std::string_view fit, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      add(fit, "error", std::move(msg));
    }
  }
};

void add_power_law_rows(FitRows& rows, std::string_view name,
                        const PowerLawFit& fit) {
  rows.add(name, "a", fit.amplitude);
  rows.add(name, "b", fit.exponent);
  rows.add(name, "residual", fit.residual);
}

void add_skew_rows(FitRows& rows, std::string_view name,
                   const SkewGaussianFit& fit) {
  rows.add(name, "location", fit.location);
  rows.add(name, "scale", fit.scale);
  rows.add(name, "shape", fit.shape);
  rows.add(name, "gamma", fit.gamma);
  rows.add(name, "mode", fit.mode);
  rows.add(name, "residual", fit.residual);
}

}  // namespace

RunSummary run_pipeline(const RunConfig& config, unsigned stage_mask) {
  validate_config(config);
  std::filesystem::create_directories(config.output_dir);
  for (const char* name : output_files(stage_mask)) {
    const auto path = std::filesystem::path(config.output_dir) / name;
    if (!config.force && std::filesystem::exists(path)) {
      throw ConfigError("output file exists (use --force): " + path.string());
    }
  }
  auto out_path = [&](const char* name) {
    return (std::filesystem::path(config.output_dir) / name).string();
  };

  RunSummary summary;

  // ---- ingest ---------------------------------------------------------------
  const SubredditCatalog catalog =
      stage("ingest", [&] { return load_catalog(config.catalog); });
  const std::uint64_t catalog_digest = file_digest(config.catalog);
  IngestResult ingest = stage("ingest", [&] {
    IngestOptions options;
    if (config.from_utc || config.to_utc) {
      options.window = TimeWindow{
          config.from_utc.value_or(std::numeric_limits<std::int64_t>::min()),
          config.to_utc.value_or(std::numeric_limits<std::int64_t>::max())};
    }
    options.catalog = &catalog;
    options.threads = config.threads;
    return ingest_files(config.comments, config.posts, options);
  });
  const UserIndex& index = ingest.user_index;
  summary.comments = ingest.comments;
  summary.posts = ingest.posts;
  summary.comment_digest = ingest.comment_digest;
  summary.post_digest = ingest.post_digest;
  summary.n_users = index.users.size();
  summary.n_subreddits = index.subreddits.size();

  // Observation window for rate thresholds: configured bounds, else the span
  // of the accepted comments.
  std::int64_t obs_t0 = 0, obs_t1 = 0;
  {
    bool seen = false;
    for (const auto& user : index.users) {
      for (const Event& e : user.events) {
        if (e.kind != EventKind::comment) continue;
        if (!seen) {
          obs_t0 = obs_t1 = e.created_utc;
          seen = true;
        } else {
          obs_t0 = std::min(obs_t0, e.created_utc);
          obs_t1 = std::max(obs_t1, e.created_utc);
        }
      }
    }
    if (config.from_utc) obs_t0 = *config.from_utc;
    if (config.to_utc) obs_t1 = *config.to_utc;
  }
  const TimeWindow obs_window{obs_t0, obs_t1};

  // ---- bots ------------------------------------------------------------------
  const bool want_bots = (stage_mask & stages::kBots) != 0 || config.exclude_bots;
  std::vector<BotFlag> flags;
  std::unordered_set<std::string> excluded;
  if (want_bots) stage("bots", [&] {
    std::vector<std::uint8_t> exotic(index.subreddits.size(), 0);
    for (std::uint32_t id = 0; id < index.subreddits.size(); ++id) {
      const CatalogEntry* entry = catalog.find(index.subreddits.name(id));
      exotic[id] = entry != nullptr && entry->exotic_rules ? 1 : 0;
    }
    std::vector<EntropyReport> reports;
    std::vector<std::uint32_t> lengths;
    for (const auto& user : index.users) {
      lengths.clear();
      for (const Event& e : user.events) {
        if (e.kind == EventKind::comment && !exotic[e.subreddit]) {
          lengths.push_back(e.body_length);
        }
      }
      if (!lengths.empty()) {
        reports.push_back(length_entropy(user.author, lengths));
      }
    }
    if (!reports.empty()) {
      BotFilterOptions options;
      options.percentile = config.bot_percentile;
      options.min_comments_for_entropy = config.bot_min_comments;
      flags = flag_automated(reports, index, obs_window, options);
    }
    for (const BotFlag& flag : flags) {
      if (flag.flagged) {
        ++summary.n_flagged;
        if (config.exclude_bots) excluded.insert(flag.author);
      }
    }
    if (stage_mask & stages::kBots) {
      CsvWriter csv(out_path("bots.csv"),
                    "author,entropy_bits,n_comments,flagged,reasons");
      for (std::size_t i = 0; i < flags.size(); ++i) {
        csv.row(flags[i].author, fmt_double(reports[i].entropy_bits),
                reports[i].n_comments, flags[i].flagged ? "true" : "false",
                flags[i].reasons_string());
      }
      summary.outputs.push_back(out_path("bots.csv"));
    }
    return 0;
  });
  summary.n_excluded = excluded.size();
  const auto is_excluded = [&](const std::string& author) {
    return config.exclude_bots && excluded.contains(author);
  };

  // ---- stats -----------------------------------------------------------------
  struct NamedHistogram {
    std::string name;
    Histogram hist;
  };
  std::vector<NamedHistogram> histograms;
  FitRows fits;
  if (stage_mask & stages::kStats) stage("stats", [&] {
    const ActivityMeasure per_author_measures[] = {
        ActivityMeasure::posts_per_author,
        ActivityMeasure::comments_per_author,
        ActivityMeasure::subreddits_posted_per_author,
        ActivityMeasure::subreddits_commented_per_author,
    };
    const ActivityMeasure per_subreddit_measures[] = {
        ActivityMeasure::posts_per_subreddit,
        ActivityMeasure::comments_per_subreddit,
    };
    for (ActivityMeasure m : per_author_measures) {
      std::vector<double> counts = activity_counts(index, m);
      if (config.exclude_bots) {
        std::vector<double> kept;
        kept.reserve(counts.size());
        for (std::size_t i = 0; i < index.users.size(); ++i) {
          if (!is_excluded(index.users[i].author)) kept.push_back(counts[i]);
        }
        counts = std::move(kept);
      }
      histograms.push_back({std::string(to_string(m)), make_log_histogram(counts)});
    }
    for (ActivityMeasure m : per_subreddit_measures) {
      histograms.push_back(
          {std::string(to_string(m)), activity_distribution(index, m)});
    }
    const std::vector<double> user_lt = mean_user_lifetimes_days(
        index, config.exclude_bots ? &excluded : nullptr);
    const std::vector<double> post_lt = mean_post_lifetimes_days(ingest.post_index);
    histograms.push_back({"user_lifetime_days", make_linear_histogram(user_lt, 1.0)});
    histograms.push_back({"post_lifetime_days", make_linear_histogram(post_lt, 1.0)});

    for (const auto& nh : histograms) {
      if (nh.name == "user_lifetime_days" || nh.name == "post_lifetime_days") {
        fits.tolerant(nh.name + "_skew_gaussian", [&] {
          add_skew_rows(fits, nh.name + "_skew_gaussian", fit_skew_gaussian(nh.hist));
        });
      } else {
        fits.tolerant(nh.name + "_power_law", [&] {
          add_power_law_rows(fits, nh.name + "_power_law", fit_power_law(nh.hist));
        });
      }
    }
    fits.tolerant("comments_per_author_double_power_law", [&] {
      const Histogram& hist = histograms[1].hist;  // comments_per_author
      const DoublePowerLawFit fit = fit_double_power_law(hist);
      const std::string name = "comments_per_author_double_power_law";
      fits.add(name, "left_a", fit.left.amplitude);
      fits.add(name, "left_b", fit.left.exponent);
      fits.add(name, "right_a", fit.right.amplitude);
      fits.add(name, "right_b", fit.right.exponent);
      fits.add(name, "breakpoint", fit.breakpoint);
      fits.add(name, "residual", fit.residual);
      fits.add(name, "single_residual", fit.single_residual);
      fits.add(name, "effectively_single", fit.effectively_single ? "true" : "false");
    });
    return 0;
  });

  // ---- gini ------------------------------------------------------------------
  ActivityBinCurve curve;
  bool have_curve = false;
  if (stage_mask & stages::kGini) stage("gini", [&] {
    const CatalogAxis axis = CatalogAxis::build(catalog, index.subreddits);
    std::vector<UserVector> users;
    users.reserve(index.users.size());
    for (const auto& user : index.users) {
      if (is_excluded(user.author)) continue;
      ActivityVector vec = activity_vector(user, axis);
      if (vec.total == 0) continue;
      users.push_back(UserVector{user.author, std::move(vec)});
    }
    if (!users.empty()) {
      GiniCurveOptions options;
      options.mode = config.gini_mode;
      options.seed = config.seed;
      options.null_reps = config.null_reps;
      curve = gini_vs_activity(users, options);
      have_curve = true;
    }
    CsvWriter csv(out_path("gini_curve.csv"),
                  "bin_lo,bin_hi,mean_subreddits,median_subreddits,mean_gini,"
                  "null_mean_gini");
    if (have_curve) {
      for (std::size_t b = 0; b < curve.size(); ++b) {
        if (curve.n_users[b] == 0) continue;
        csv.row(fmt_double(curve.bin_edges[b]), fmt_double(curve.bin_edges[b + 1]),
                fmt_double(curve.mean_subreddits[b]),
                fmt_double(curve.median_subreddits[b]),
                fmt_double(curve.mean_gini[b]),
                fmt_double(curve.null_mean_gini[b]));
      }
    }
    summary.outputs.push_back(out_path("gini_curve.csv"));
    return 0;
  });

  // ---- interest ---------------------------------------------------------------
  std::vector<UserEvents> user_events;
  EventCountSummary event_summary;
  if (stage_mask & stages::kInterest) stage("interest", [&] {
    const std::vector<std::string> selected =
        select_active_users(index, config.min_comments);
    const InterestAxis shared_topic = topic_axis(index.subreddits, catalog);
    std::vector<InterestEvent> all_events;
    CsvWriter csv(out_path("interest_events.csv"), "author,bin,kind,from,to,angle");
    for (const std::string& author : selected) {
      if (is_excluded(author)) continue;
      const UserActivitySeries* series = index.find(author);
      UserInterestResult result = analyze_user_interest(
          *series, index.subreddits, shared_topic, config.bin_size,
          config.threshold_deg);
      for (const InterestEvent& e : result.events) {
        csv.row(author, e.at_bin, to_string(e.kind), e.from, e.to,
                fmt_double(e.angle));
        (e.kind == InterestKind::drift ? summary.n_drifts : summary.n_shifts) += 1;
        all_events.push_back(e);
      }
      user_events.push_back(UserEvents{author, std::move(result.events)});
      summary.n_selected += 1;
    }
    for (Level level : {Level::subreddit, Level::topic}) {
      const TransitionMatrix matrix = transition_matrix(all_events, level);
      const char* name =
          level == Level::subreddit ? "transition_drift.csv" : "transition_shift.csv";
      std::ofstream out(out_path(name));
      if (!out) throw IoError(std::string("cannot open output file: ") + name);
      out << "from";
      for (const auto& label : matrix.labels) out << ',' << label;
      out << '\n';
      for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
        out << matrix.labels[i];
        for (std::size_t j = 0; j < matrix.labels.size(); ++j) {
          out << ',' << matrix.counts[i][j];
        }
        out << '\n';
      }
    }
    if (!user_events.empty()) {
      event_summary = event_count_distributions(user_events);
      summary.shift_user_fraction = event_summary.shift_user_fraction;
      histograms.push_back({"drifts_per_user", event_summary.drifts});
      histograms.push_back({"shifts_per_user", event_summary.shifts});
    }
    return 0;
  });
  if (stage_mask & stages::kInterest) {
    summary.outputs.push_back(out_path("interest_events.csv"));
    summary.outputs.push_back(out_path("transition_drift.csv"));
    summary.outputs.push_back(out_path("transition_shift.csv"));
  }

  // ---- tables deferred to the end so interest histograms are included --------
  if (stage_mask & stages::kStats) {
    CsvWriter csv(out_path("activity_histograms.csv"), "measure,value,count");
    for (const auto& nh : histograms) {
      for (std::size_t i = 0; i < nh.hist.size(); ++i) {
        if (nh.hist.counts[i] == 0.0) continue;
        csv.row(nh.name, fmt_double(nh.hist.center(i)), fmt_double(nh.hist.counts[i]));
      }
    }
    summary.outputs.push_back(out_path("activity_histograms.csv"));
  }
  if (stage_mask & stages::kStats) {
    CsvWriter csv(out_path("activity_fits.csv"), "fit,param,value");
    for (const auto& row : fits.rows) csv.row(row[0], row[1], row[2]);
    summary.outputs.push_back(out_path("activity_fits.csv"));
  }

  // ---- manifest ----------------------------------------------------------------
  if (stage_mask == stages::kAll) {
    std::ofstream out(out_path("manifest.txt"));
    if (!out) throw IoError("cannot open manifest for writing");
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "generated_at=" << stamp << '\n';
    out << "tool=interestflow\n";
    for (const auto& p : config.comments) out << "input_comments=" << p << '\n';
    for (const auto& p : config.posts) out << "input_posts=" << p << '\n';
    out << "catalog=" << config.catalog << '\n';
    out << "catalog_digest=" << catalog_digest << '\n';
    out << "comment_digest=" << summary.comment_digest << '\n';
    out << "post_digest=" << summary.post_digest << '\n';
    if (config.from_utc) out << "from_utc=" << *config.from_utc << '\n';
    if (config.to_utc) out << "to_utc=" << *config.to_utc << '\n';
    out << "observed_from_utc=" << obs_t0 << '\n';
    out << "observed_to_utc=" << obs_t1 << '\n';
    out << "bin_size=" << config.bin_size << '\n';
    out << "threshold_deg=" << fmt_double(config.threshold_deg) << '\n';
    out << "min_comments=" << config.min_comments << '\n';
    out << "gini_mode=" << to_string(config.gini_mode) << '\n';
    out << "seed=" << config.seed << '\n';
    out << "null_reps=" << config.null_reps << '\n';
    out << "bot_percentile=" << fmt_double(config.bot_percentile) << '\n';
    out << "bot_min_comments=" << config.bot_min_comments << '\n';
    out << "exclude_bots=" << (config.exclude_bots ? "true" : "false") << '\n';
    out << "threads=" << config.threads << '\n';
    const auto counters = [&out](const char* prefix, const IngestCounters& c) {
      out << prefix << "_read=" << c.read << '\n';
      out << prefix << "_accepted=" << c.accepted << '\n';
      out << prefix << "_malformed=" << c.malformed << '\n';
      out << prefix << "_missing_field=" << c.missing_field << '\n';
      out << prefix << "_filtered=" << c.filtered << '\n';
      out << prefix << "_deleted_author=" << c.deleted_author << '\n';
      out << prefix << "_skipped=" << c.skipped() << '\n';
    };
    counters("comments", summary.comments);
    counters("posts", summary.posts);
    out << "users_indexed=" << summary.n_users << '\n';
    out << "subreddits_seen=" << summary.n_subreddits << '\n';
    out << "users_selected=" << summary.n_selected << '\n';
    out << "users_flagged=" << summary.n_flagged << '\n';
    out << "users_excluded=" << summary.n_excluded << '\n';
    out << "drift_events=" << summary.n_drifts << '\n';
    out << "shift_events=" << summary.n_shifts << '\n';
    out << "shift_user_fraction=" << fmt_double(summary.shift_user_fraction) << '\n';
    summary.outputs.push_back(out_path("manifest.txt"));
  }
  return summary;
}

}  // namespace iflow
