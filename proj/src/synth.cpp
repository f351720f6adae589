#include "interestflow/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "interestflow/errors.hpp"
#include "interestflow/rng.hpp"

namespace iflow {

std::string synth_user_name(std::size_t idx) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "u%06zu", idx);
  return buf;
}

std::string synth_subreddit_name(std::size_t idx) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "sub%04zu", idx);
  return buf;
}

TopicClass synth_topic_of(std::size_t sub_idx) {
  return static_cast<TopicClass>(sub_idx % kTopicClassCount);
}

void auto_plant(SynthSpec& spec, std::size_t n_event_users,
                std::size_t events_per_user, std::size_t n_bots,
                std::size_t bot_comments, std::uint32_t bot_length) {
  if (spec.n_subreddits < 2 * kTopicClassCount) {
    throw InvalidSpec("auto_plant needs at least two subreddits per topic");
  }
  const std::size_t per_topic = spec.n_subreddits / kTopicClassCount;
  for (std::size_t u = 0; u < n_event_users; ++u) {
    const std::string author = synth_user_name(u);
    // Walk subreddits as (topic, member); drifts move within the topic,
    // shifts advance the topic. Chained so segment k ends where k+1 begins.
    std::size_t topic = u % kTopicClassCount;
    std::size_t member = u % per_topic;
    auto sub_at = [&] { return synth_subreddit_name(topic + 15 * member); };
    std::string current = sub_at();
    for (std::size_t e = 0; e < events_per_user; ++e) {
      PlantedEvent event;
      event.author = author;
      event.at_bin = 4 + e;  // first segment spans 4 bins (80 comments)
      event.from = current;
      if ((u + e) % 2 == 0) {
        event.kind = InterestKind::drift;
        member = (member + 1) % per_topic;
      } else {
        event.kind = InterestKind::shift;
        topic = (topic + 1) % kTopicClassCount;
      }
      event.to = sub_at();
      current = event.to;
      spec.planted_events.push_back(std::move(event));
    }
  }
  for (std::size_t b = 0; b < n_bots; ++b) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "plantbot%03zu", b);
    spec.planted_bots.push_back(PlantedBot{buf, bot_length, bot_comments});
  }
}

namespace {

void append_num(std::string& s, std::int64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  s.append(buf, ptr);
}

class LineWriter {
 public:
  explicit LineWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open for writing: " + path);
    buf_.reserve(1 << 17);
  }
  std::string& begin_line() { return buf_; }
  void end_line() {
    buf_.push_back('\n');
    if (buf_.size() > (1 << 16)) flush();
  }
  void write_line(std::string_view s) {
    buf_.append(s);
    end_line();
  }
  void close() {
    flush();
    out_.close();
    if (!out_) throw IoError("write failure on output file");
  }

 private:
  void flush() {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
  }
  std::ofstream out_;
  std::string buf_;
};

struct Plan {
  std::unordered_map<std::string, std::vector<const PlantedEvent*>> events;
  std::unordered_map<std::string, const PlantedBot*> bots;
  std::vector<std::string> extra_authors;  // beyond the u-indexed users
  std::unordered_map<std::string, std::size_t> sub_ids;
};

Plan validate(const SynthSpec& spec) {
  if (spec.n_users < 1) throw InvalidSpec("n_users must be positive");
  if (spec.n_subreddits < 1) throw InvalidSpec("n_subreddits must be positive");
  if (spec.bin_size < 2) throw InvalidSpec("bin_size must be at least 2");
  if (spec.from_utc >= spec.to_utc) throw InvalidSpec("window must be nonempty");
  if (spec.min_comments_per_user < 1 ||
      spec.min_comments_per_user > spec.max_comments_per_user) {
    throw InvalidSpec("comment totals range is invalid");
  }
  if (spec.background_concentration < 0.0 || spec.background_concentration > 1.0) {
    throw InvalidSpec("background_concentration must lie in [0, 1]");
  }
  if (spec.posts_per_subreddit < 1) throw InvalidSpec("posts_per_subreddit must be positive");

  Plan plan;
  for (std::size_t s = 0; s < spec.n_subreddits; ++s) {
    plan.sub_ids.emplace(synth_subreddit_name(s), s);
  }
  auto sub_of = [&](const std::string& name) {
    auto it = plan.sub_ids.find(name);
    if (it == plan.sub_ids.end()) {
      throw InvalidSpec("planted event references unknown subreddit: " + name);
    }
    return it->second;
  };

  std::unordered_set<std::string> u_names;
  for (std::size_t u = 0; u < spec.n_users; ++u) u_names.insert(synth_user_name(u));

  for (const PlantedEvent& e : spec.planted_events) {
    if (e.author.empty()) throw InvalidSpec("planted event with empty author");
    if (e.at_bin < 1) throw InvalidSpec("planted event at_bin must be >= 1");
    const std::size_t from = sub_of(e.from);
    const std::size_t to = sub_of(e.to);
    if (from == to) throw InvalidSpec("planted event must change subreddit");
    const bool same_topic = synth_topic_of(from) == synth_topic_of(to);
    if (e.kind == InterestKind::drift && !same_topic) {
      throw InvalidSpec("planted drift crosses topics: " + e.from + "->" + e.to);
    }
    if (e.kind == InterestKind::shift && same_topic) {
      throw InvalidSpec("planted shift stays in one topic: " + e.from + "->" + e.to);
    }
    auto [it, inserted] = plan.events.try_emplace(e.author);
    if (inserted && !u_names.count(e.author)) plan.extra_authors.push_back(e.author);
    if (!it->second.empty()) {
      const PlantedEvent* prev = it->second.back();
      if (e.at_bin <= prev->at_bin) {
        throw InvalidSpec("planted events for " + e.author +
                          " must have strictly increasing bins");
      }
      if (prev->to != e.from) {
        throw InvalidSpec("planted events for " + e.author + " do not chain");
      }
    }
    it->second.push_back(&e);
  }
  for (const PlantedBot& b : spec.planted_bots) {
    if (b.author.empty()) throw InvalidSpec("planted bot with empty author");
    if (b.fixed_length < 1) throw InvalidSpec("bot fixed_length must be positive");
    if (b.n_comments < 1) throw InvalidSpec("bot n_comments must be positive");
    if (plan.events.count(b.author)) {
      throw InvalidSpec("author cannot be both bot and event user: " + b.author);
    }
    if (!plan.bots.emplace(b.author, &b).second) {
      throw InvalidSpec("duplicate planted bot: " + b.author);
    }
    if (!u_names.count(b.author)) plan.extra_authors.push_back(b.author);
  }
  return plan;
}

std::vector<double> total_cdf(const SynthSpec& spec) {
  std::vector<double> cdf;
  long double acc = 0;
  for (std::uint32_t k = spec.min_comments_per_user;
       k <= spec.max_comments_per_user; ++k) {
    acc += std::pow(static_cast<long double>(k), spec.activity_exponent);
    cdf.push_back(static_cast<double>(acc));
  }
  for (double& c : cdf) c /= cdf.back();
  return cdf;
}

std::uint32_t draw_total(const SynthSpec& spec, const std::vector<double>& cdf,
                         std::mt19937_64& rng) {
  const double u = uniform_real01(rng);
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  const auto off = static_cast<std::uint32_t>(it - cdf.begin());
  return std::min(spec.min_comments_per_user + off, spec.max_comments_per_user);
}

}  // namespace

void scale_to_target_records(SynthSpec& spec, std::size_t target) {
  std::unordered_map<std::string, std::size_t> last_bin;
  for (const auto& e : spec.planted_events) {
    auto& bin = last_bin[e.author];
    bin = std::max(bin, e.at_bin);
  }
  std::size_t fixed = spec.n_subreddits * spec.posts_per_subreddit;
  std::size_t planted_users = 0;
  for (const auto& [author, bin] : last_bin) {
    fixed += (bin + 4) * spec.bin_size;
    if (author.size() == 7 && author[0] == 'u') ++planted_users;
  }
  for (const auto& b : spec.planted_bots) fixed += b.n_comments;
  long double wsum = 0;
  long double ksum = 0;
  for (std::uint32_t k = spec.min_comments_per_user;
       k <= spec.max_comments_per_user; ++k) {
    const long double w =
        std::pow(static_cast<long double>(k), spec.activity_exponent);
    wsum += w;
    ksum += w * k;
  }
  const double mean = static_cast<double>(ksum / wsum);
  if (target <= fixed) return;
  const auto needed = static_cast<std::size_t>(
      std::ceil(static_cast<double>(target - fixed) / mean));
  spec.n_users = std::max(spec.n_users, planted_users + needed);
}

SynthResult generate_corpus(const SynthSpec& spec, const std::string& out_dir) {
  const Plan plan = validate(spec);
  std::filesystem::create_directories(out_dir);
  SynthResult result;
  result.comments_path = out_dir + "/comments.ndjson";
  result.posts_path = out_dir + "/posts.ndjson";
  result.catalog_path = out_dir + "/catalog.csv";
  result.events_ledger_path = out_dir + "/ledger_events.csv";
  result.bots_ledger_path = out_dir + "/ledger_bots.csv";
  result.spec_path = out_dir + "/synth_spec.txt";

  // catalog
  {
    LineWriter w(result.catalog_path);
    w.write_line("subreddit,topic_class,included,exotic_rules");
    for (std::size_t s = 0; s < spec.n_subreddits; ++s) {
      std::string& line = w.begin_line();
      line += synth_subreddit_name(s);
      line += ',';
      line += to_string(synth_topic_of(s));
      line += ",true,false";
      w.end_line();
    }
    w.close();
  }

  // ledgers
  {
    LineWriter w(result.events_ledger_path);
    w.write_line("author,at_bin,kind,from,to");
    for (const PlantedEvent& e : spec.planted_events) {
      std::string& line = w.begin_line();
      line += e.author;
      line += ',';
      append_num(line, static_cast<std::int64_t>(e.at_bin));
      line += ',';
      line += to_string(e.kind);
      line += ',';
      if (e.kind == InterestKind::drift) {
        line += e.from;
        line += ',';
        line += e.to;
      } else {
        line += to_string(synth_topic_of(plan.sub_ids.at(e.from)));
        line += ',';
        line += to_string(synth_topic_of(plan.sub_ids.at(e.to)));
      }
      w.end_line();
    }
    w.close();
  }
  {
    LineWriter w(result.bots_ledger_path);
    w.write_line("author,fixed_length,n_comments");
    for (const PlantedBot& b : spec.planted_bots) {
      std::string& line = w.begin_line();
      line += b.author;
      line += ',';
      append_num(line, b.fixed_length);
      line += ',';
      append_num(line, static_cast<std::int64_t>(b.n_comments));
      w.end_line();
    }
    w.close();
  }

  // spec echo
  {
    std::ofstream out(result.spec_path);
    out << "n_users=" << spec.n_users << "\nn_subreddits=" << spec.n_subreddits
        << "\nactivity_exponent=" << spec.activity_exponent
        << "\nmin_comments_per_user=" << spec.min_comments_per_user
        << "\nmax_comments_per_user=" << spec.max_comments_per_user
        << "\nbackground_concentration=" << spec.background_concentration
        << "\nposts_per_subreddit=" << spec.posts_per_subreddit
        << "\nbin_size=" << spec.bin_size << "\nfrom_utc=" << spec.from_utc
        << "\nto_utc=" << spec.to_utc << "\nseed=" << spec.seed
        << "\nplanted_events=" << spec.planted_events.size()
        << "\nplanted_bots=" << spec.planted_bots.size() << "\n";
  }

  const std::vector<double> cdf = total_cdf(spec);
  const std::int64_t span = spec.to_utc - spec.from_utc;
  std::uint32_t max_len = 60;
  for (const PlantedBot& b : spec.planted_bots) max_len = std::max(max_len, b.fixed_length);
  const std::string body_pool(max_len, 'x');
  std::vector<std::uint64_t> link_counter(spec.n_subreddits, 0);
  std::uint64_t comment_serial = 0;

  LineWriter comments(result.comments_path);
  auto emit_comment = [&](const std::string& author, std::size_t sub_idx,
                          std::int64_t t, std::uint32_t body_len) {
    const std::string sub = synth_subreddit_name(sub_idx);
    const std::uint64_t post_slot = link_counter[sub_idx]++ % spec.posts_per_subreddit;
    std::string& line = comments.begin_line();
    line += R"({"author":")";
    line += author;
    line += R"(","subreddit":")";
    line += sub;
    line += R"(","created_utc":)";
    append_num(line, t);
    line += R"(,"body":")";
    line.append(body_pool, 0, body_len);
    line += R"(","id":"c)";
    append_num(line, static_cast<std::int64_t>(comment_serial++));
    line += R"(","link_id":"t3_)";
    line += sub;
    line += '_';
    append_num(line, static_cast<std::int64_t>(post_slot));
    line += R"("})";
    comments.end_line();
  };
  auto time_at = [&](std::size_t j, std::size_t n) {
    return spec.from_utc + static_cast<std::int64_t>((j + 1) * static_cast<std::uint64_t>(span) / (n + 1));
  };

  auto emit_author = [&](const std::string& author, std::size_t u_idx, bool is_u) {
    std::mt19937_64 rng(derive_seed(spec.seed, author));
    if (auto bit = plan.bots.find(author); bit != plan.bots.end()) {
      const PlantedBot& bot = *bit->second;
      const std::size_t home = uniform_below(rng, spec.n_subreddits);
      for (std::size_t j = 0; j < bot.n_comments; ++j) {
        emit_comment(author, home, time_at(j, bot.n_comments), bot.fixed_length);
      }
      result.n_comment_records += bot.n_comments;
      return;
    }
    if (auto eit = plan.events.find(author); eit != plan.events.end()) {
      const auto& events = eit->second;
      // 4 tail bins leave >60 comments on the final subreddit, keeping every
      // planted user inside the default selection.
      const std::size_t bins = events.back()->at_bin + 4;
      const std::size_t n = bins * spec.bin_size;
      // segment subreddit per bin: starts on the first event's `from`
      std::vector<std::size_t> bin_sub(bins, plan.sub_ids.at(events.front()->from));
      for (const PlantedEvent* e : events) {
        for (std::size_t b = e->at_bin; b < bins; ++b) {
          bin_sub[b] = plan.sub_ids.at(e->to);
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint32_t len = 20 + static_cast<std::uint32_t>(uniform_below(rng, 41));
        emit_comment(author, bin_sub[j / spec.bin_size], time_at(j, n), len);
      }
      result.n_comment_records += n;
      return;
    }
    (void)is_u;
    (void)u_idx;
    const std::uint32_t total = draw_total(spec, cdf, rng);
    const std::size_t home = uniform_below(rng, spec.n_subreddits);
    for (std::uint32_t j = 0; j < total; ++j) {
      std::size_t sub = home;
      if (spec.background_concentration < 1.0 &&
          uniform_real01(rng) >= spec.background_concentration) {
        sub = uniform_below(rng, spec.n_subreddits);
      }
      const std::uint32_t len = 20 + static_cast<std::uint32_t>(uniform_below(rng, 41));
      emit_comment(author, sub, time_at(j, total), len);
    }
    result.n_comment_records += total;
  };

  for (std::size_t u = 0; u < spec.n_users; ++u) {
    emit_author(synth_user_name(u), u, true);
  }
  for (const std::string& author : plan.extra_authors) {
    emit_author(author, 0, false);
  }
  comments.close();

  // posts: fixed slots per subreddit so comment link_ids always resolve
  LineWriter posts(result.posts_path);
  for (std::size_t s = 0; s < spec.n_subreddits; ++s) {
    const std::string sub = synth_subreddit_name(s);
    for (std::size_t k = 0; k < spec.posts_per_subreddit; ++k) {
      const std::size_t serial = s * spec.posts_per_subreddit + k;
      std::string& line = posts.begin_line();
      line += R"({"author":")";
      line += synth_user_name((s * 31 + k) % spec.n_users);
      line += R"(","subreddit":")";
      line += sub;
      line += R"(","created_utc":)";
      append_num(line, spec.from_utc + static_cast<std::int64_t>(serial * 997 % static_cast<std::uint64_t>(span)));
      line += R"(,"id":"t3_)";
      line += sub;
      line += '_';
      append_num(line, static_cast<std::int64_t>(k));
      line += R"("})";
      posts.end_line();
      ++result.n_post_records;
    }
  }
  posts.close();
  return result;
}

}  // namespace iflow
