#include "interestflow/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <memory>
#include <utility>

#include "interestflow/errors.hpp"
#include "interestflow/rng.hpp"

#ifdef IFLOW_HAVE_ZSTD
#include <zstd.h>
#endif

namespace iflow {

std::size_t UserActivitySeries::comment_count() const {
  std::size_t n = 0;
  for (const Event& e : events) n += e.kind == EventKind::comment;
  return n;
}

std::uint32_t SubredditPool::intern(std::string_view name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> SubredditPool::find(std::string_view name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const UserActivitySeries* UserIndex::find(std::string_view author) const {
  auto it = by_author_.find(author);
  return it == by_author_.end() ? nullptr : &users[it->second];
}

std::size_t UserIndex::total_events() const {
  std::size_t n = 0;
  for (const auto& u : users) n += u.events.size();
  return n;
}

namespace {

template <typename R>
std::vector<R> filter_impl(std::vector<R> records, const SubredditCatalog& catalog,
                           TimeWindow window) {
  std::erase_if(records, [&](const R& r) {
    return !catalog.is_included(r.subreddit) || !window.contains(r.created_utc);
  });
  return records;
}

}  // namespace

std::vector<CommentRecord> filter_records(std::vector<CommentRecord> records,
                                          const SubredditCatalog& catalog,
                                          TimeWindow window) {
  return filter_impl(std::move(records), catalog, window);
}

std::vector<PostRecord> filter_records(std::vector<PostRecord> records,
                                       const SubredditCatalog& catalog,
                                       TimeWindow window) {
  return filter_impl(std::move(records), catalog, window);
}

std::vector<Event>& UserIndexBuilder::events_for(const std::string& author) {
  auto it = index_.by_author_.find(author);
  if (it == index_.by_author_.end()) {
    it = index_.by_author_.emplace(author, index_.users.size()).first;
    index_.users.push_back(UserActivitySeries{author, {}});
  }
  return index_.users[it->second].events;
}

void UserIndexBuilder::add(const CommentRecord& rec) {
  events_for(rec.author).push_back(Event{rec.created_utc,
                                         index_.subreddits.intern(rec.subreddit),
                                         rec.body_length, EventKind::comment});
}

void UserIndexBuilder::add(const PostRecord& rec) {
  events_for(rec.author).push_back(
      Event{rec.created_utc, index_.subreddits.intern(rec.subreddit), 0,
            EventKind::post});
}

UserIndex UserIndexBuilder::finish() {
  for (auto& user : index_.users) {
    std::stable_sort(user.events.begin(), user.events.end(),
                     [](const Event& a, const Event& b) {
                       return a.created_utc < b.created_utc;
                     });
  }
  std::sort(index_.users.begin(), index_.users.end(),
            [](const UserActivitySeries& a, const UserActivitySeries& b) {
              return a.author < b.author;
            });
  index_.by_author_.clear();
  for (std::size_t i = 0; i < index_.users.size(); ++i) {
    index_.by_author_.emplace(index_.users[i].author, i);
  }
  return std::move(index_);
}

void PostIndexBuilder::add(const CommentRecord& rec) {
  auto [it, inserted] = index_.try_emplace(rec.parent_post_id);
  if (inserted) it->second.subreddit = pool_->intern(rec.subreddit);
  it->second.timestamps.push_back(rec.created_utc);
}

PostIndex PostIndexBuilder::finish() {
  for (auto& [id, thread] : index_) {
    std::sort(thread.timestamps.begin(), thread.timestamps.end());
  }
  return std::move(index_);
}

UserIndex build_user_index(std::span<const CommentRecord> comments,
                           std::span<const PostRecord> posts) {
  UserIndexBuilder builder;
  for (const auto& c : comments) builder.add(c);
  for (const auto& p : posts) builder.add(p);
  return builder.finish();
}

PostIndex build_post_index(std::span<const CommentRecord> comments,
                           SubredditPool* pool) {
  PostIndexBuilder builder(pool);
  for (const auto& c : comments) builder.add(c);
  return builder.finish();
}

IngestCounters& IngestCounters::operator+=(const IngestCounters& o) {
  read += o.read;
  malformed += o.malformed;
  missing_field += o.missing_field;
  filtered += o.filtered;
  deleted_author += o.deleted_author;
  accepted += o.accepted;
  return *this;
}

bool is_sentinel_author(std::string_view author) {
  return author == "[deleted]" || author == "[removed]";
}

namespace {

// ---- line sources -----------------------------------------------------------

class LineSource {
 public:
  virtual ~LineSource() = default;
  virtual bool next(std::string& line) = 0;
};

class PlainLineSource : public LineSource {
 public:
  explicit PlainLineSource(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open input file: " + path);
  }
  bool next(std::string& line) override {
    return static_cast<bool>(std::getline(in_, line));
  }

 private:
  std::ifstream in_;
};

#ifdef IFLOW_HAVE_ZSTD
class ZstdLineSource : public LineSource {
 public:
  explicit ZstdLineSource(const std::string& path)
      : in_(path, std::ios::binary), stream_(ZSTD_createDStream()) {
    if (!in_) throw IoError("cannot open input file: " + path);
    if (!stream_) throw IoError("ZSTD_createDStream failed");
    in_buf_.resize(ZSTD_DStreamInSize());
    out_buf_.resize(ZSTD_DStreamOutSize());
  }
  ~ZstdLineSource() override { ZSTD_freeDStream(stream_); }

  bool next(std::string& line) override {
    line.clear();
    for (;;) {
      auto nl = pending_.find('\n', scan_pos_);
      if (nl != std::string::npos) {
        line.assign(pending_, 0, nl);
        pending_.erase(0, nl + 1);
        scan_pos_ = 0;
        return true;
      }
      scan_pos_ = pending_.size();
      if (!fill()) {
        if (pending_.empty()) return false;
        line = std::move(pending_);
        pending_.clear();
        scan_pos_ = 0;
        return true;
      }
    }
  }

 private:
  bool fill() {
    for (;;) {
      if (input_.pos < input_.size) {
        ZSTD_outBuffer out{out_buf_.data(), out_buf_.size(), 0};
        const std::size_t rc = ZSTD_decompressStream(stream_, &out, &input_);
        if (ZSTD_isError(rc)) {
          throw IoError(std::string("zstd decompression error: ") +
                        ZSTD_getErrorName(rc));
        }
        if (out.pos > 0) {
          pending_.append(static_cast<const char*>(out.dst), out.pos);
          return true;
        }
        continue;
      }
      in_.read(in_buf_.data(), static_cast<std::streamsize>(in_buf_.size()));
      const auto got = static_cast<std::size_t>(in_.gcount());
      if (got == 0) return false;
      input_ = ZSTD_inBuffer{in_buf_.data(), got, 0};
    }
  }

  std::ifstream in_;
  ZSTD_DStream* stream_;
  std::vector<char> in_buf_;
  std::vector<char> out_buf_;
  ZSTD_inBuffer input_{nullptr, 0, 0};
  std::string pending_;
  std::size_t scan_pos_ = 0;
};
#endif  // IFLOW_HAVE_ZSTD

bool has_suffix(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::unique_ptr<LineSource> open_line_source(const std::string& path) {
  if (has_suffix(path, ".zst")) {
#ifdef IFLOW_HAVE_ZSTD
    return std::make_unique<ZstdLineSource>(path);
#else
    throw IoError("zstd input requested but this build has no zstd support: " + path);
#endif
  }
  return std::make_unique<PlainLineSource>(path);
}

// ---- batched parsing ----------------------------------------------------------

enum class ParseStatus : std::uint8_t { ok, malformed, missing_field };

template <typename R>
struct ParseOutcome {
  ParseStatus status = ParseStatus::ok;
  R record;
};

template <typename R, typename ParseFn>
void parse_range(const std::vector<std::string>& lines, std::size_t begin,
                 std::size_t end, std::vector<ParseOutcome<R>>& out, ParseFn parse) {
  for (std::size_t i = begin; i < end; ++i) {
    try {
      out[i].record = parse(lines[i]);
      out[i].status = ParseStatus::ok;
    } catch (const MissingField&) {
      out[i].status = ParseStatus::missing_field;
    } catch (const MalformedRecord&) {
      out[i].status = ParseStatus::malformed;
    }
  }
}

// Parse a batch of lines, optionally across threads. Results land in
// line-order slots, so scheduling never affects downstream state.
template <typename R, typename ParseFn>
std::vector<ParseOutcome<R>> parse_batch(const std::vector<std::string>& lines,
                                         int threads, ParseFn parse) {
  std::vector<ParseOutcome<R>> out(lines.size());
  if (threads <= 1 || lines.size() < 4096) {
    parse_range(lines, 0, lines.size(), out, parse);
    return out;
  }
  const std::size_t per = (lines.size() + threads - 1) / threads;
  std::vector<std::future<void>> futures;
  for (int t = 0; t < threads; ++t) {
    const std::size_t begin = t * per;
    const std::size_t end = std::min(lines.size(), begin + per);
    if (begin >= end) break;
    futures.push_back(std::async(std::launch::async, [&, begin, end] {
      parse_range(lines, begin, end, out, parse);
    }));
  }
  for (auto& f : futures) f.get();
  return out;
}

template <typename R, typename ParseFn, typename AcceptFn>
void ingest_stream(const std::vector<std::string>& paths, const IngestOptions& options,
                   IngestCounters& counters, std::uint64_t& digest, ParseFn parse,
                   AcceptFn accept) {
  digest = kFnvOffset;
  std::vector<std::string> lines;
  lines.reserve(options.batch_lines);
  for (const auto& path : paths) {
    auto source = open_line_source(path);
    bool more = true;
    while (more) {
      lines.clear();
      std::string line;
      while (lines.size() < options.batch_lines && (more = source->next(line))) {
        digest = fnv1a64(line, digest);
        digest = fnv1a64("\n", digest);
        lines.push_back(std::move(line));
      }
      if (lines.empty()) break;
      counters.read += lines.size();
      auto outcomes = parse_batch<R>(lines, options.threads, parse);
      for (auto& outcome : outcomes) {
        switch (outcome.status) {
          case ParseStatus::malformed:
            ++counters.malformed;
            break;
          case ParseStatus::missing_field:
            ++counters.missing_field;
            break;
          case ParseStatus::ok: {
            const R& rec = outcome.record;
            const bool in_window =
                !options.window || options.window->contains(rec.created_utc);
            const bool in_catalog =
                options.catalog == nullptr || options.catalog->is_included(rec.subreddit);
            if (!in_window || !in_catalog) {
              ++counters.filtered;
            } else if (is_sentinel_author(rec.author)) {
              ++counters.deleted_author;
            } else {
              ++counters.accepted;
              accept(rec);
            }
            break;
          }
        }
      }
    }
  }
}

}  // namespace

IngestResult ingest_files(const std::vector<std::string>& comment_paths,
                          const std::vector<std::string>& post_paths,
                          const IngestOptions& options) {
  IngestResult result;
  UserIndexBuilder user_builder;
  // The post index shares the user index's pool so subreddit ids line up.
  // Pool insertion happens on the accept path only, which is sequential.
  PostIndexBuilder post_builder(user_builder.pool());

  ingest_stream<CommentRecord>(
      comment_paths, options, result.comments, result.comment_digest,
      [](const std::string& line) { return parse_comment(line); },
      [&](const CommentRecord& rec) {
        user_builder.add(rec);
        post_builder.add(rec);
      });

  ingest_stream<PostRecord>(
      post_paths, options, result.posts, result.post_digest,
      [](const std::string& line) { return parse_post(line); },
      [&](const PostRecord& rec) { user_builder.add(rec); });

  result.post_index = post_builder.finish();
  result.user_index = user_builder.finish();
  return result;
}

}  // namespace iflow
