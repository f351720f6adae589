#ifndef INTERESTFLOW_INGEST_HPP_
#define INTERESTFLOW_INGEST_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "interestflow/catalog.hpp"
#include "interestflow/record.hpp"

namespace iflow {

enum class EventKind : std::uint8_t { comment, post };

// One user event, with the subreddit interned through a SubredditPool.
struct Event {
  std::int64_t created_utc = 0;
  std::uint32_t subreddit = 0;
  std::uint32_t body_length = 0;  // comments only; 0 for posts
  EventKind kind = EventKind::comment;
};

struct UserActivitySeries {
  std::string author;
  std::vector<Event> events;  // ascending created_utc, input order on ties

  std::size_t comment_count() const;
};

// Interned subreddit names, shared by every index built from one ingest run.
class SubredditPool {
 public:
  std::uint32_t intern(std::string_view name);
  const std::string& name(std::uint32_t id) const { return names_[id]; }
  std::optional<std::uint32_t> find(std::string_view name) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t, TransparentStringHash,
                     std::equal_to<>>
      ids_;
};

// Inclusive on both ends.
struct TimeWindow {
  std::int64_t t0 = 0;
  std::int64_t t1 = 0;
  bool contains(std::int64_t t) const { return t0 <= t && t <= t1; }
};

struct UserIndex {
  std::vector<UserActivitySeries> users;  // sorted by author
  SubredditPool subreddits;

  const UserActivitySeries* find(std::string_view author) const;
  std::size_t total_events() const;

 private:
  friend class UserIndexBuilder;
  std::unordered_map<std::string, std::size_t, TransparentStringHash,
                     std::equal_to<>>
      by_author_;
};

// Per-post comment timeline, keyed by parent post id. Timestamps sorted
// ascending; subreddit is taken from the post's comments.
struct PostThread {
  std::uint32_t subreddit = 0;
  std::vector<std::int64_t> timestamps;
};
using PostIndex = std::map<std::string, PostThread>;

// --- Pure stream operations -------------------------------------------------

// Keep exactly the records whose subreddit is cataloged with included=true
// and whose timestamp lies inside the window; order preserved.
std::vector<CommentRecord> filter_records(std::vector<CommentRecord> records,
                                          const SubredditCatalog& catalog,
                                          TimeWindow window);
std::vector<PostRecord> filter_records(std::vector<PostRecord> records,
                                       const SubredditCatalog& catalog,
                                       TimeWindow window);

// Incremental index construction. add() is order-sensitive: tie timestamps
// keep insertion order after finish().
class UserIndexBuilder {
 public:
  void add(const CommentRecord& rec);
  void add(const PostRecord& rec);
  UserIndex finish();
  // Pool shared with the index under construction; ids stay valid across
  // finish() since they are plain offsets.
  SubredditPool* pool() { return &index_.subreddits; }

 private:
  UserIndex index_;
  std::vector<Event>& events_for(const std::string& author);
};

class PostIndexBuilder {
 public:
  explicit PostIndexBuilder(SubredditPool* pool) : pool_(pool) {}
  void add(const CommentRecord& rec);
  PostIndex finish();

 private:
  SubredditPool* pool_;
  PostIndex index_;
};

UserIndex build_user_index(std::span<const CommentRecord> comments,
                           std::span<const PostRecord> posts = {});
// Post timelines come from comments alone (a post with no comments has no
// lifetime and no entry). The shared pool keeps subreddit ids aligned with a
// UserIndex built from the same ingest pass.
PostIndex build_post_index(std::span<const CommentRecord> comments,
                           SubredditPool* pool);

// --- File ingestion ----------------------------------------------------------

struct IngestCounters {
  std::uint64_t read = 0;
  std::uint64_t malformed = 0;
  std::uint64_t missing_field = 0;
  std::uint64_t filtered = 0;        // excluded subreddit or outside window
  std::uint64_t deleted_author = 0;  // sentinel authors such as [deleted]
  std::uint64_t accepted = 0;

  std::uint64_t skipped() const {
    return malformed + missing_field + filtered + deleted_author;
  }
  IngestCounters& operator+=(const IngestCounters& o);
};

struct IngestOptions {
  std::optional<TimeWindow> window;
  const SubredditCatalog* catalog = nullptr;  // null: keep every subreddit
  int threads = 1;
  std::size_t batch_lines = 262144;
};

struct IngestResult {
  UserIndex user_index;
  PostIndex post_index;
  IngestCounters comments;
  IngestCounters posts;
  std::uint64_t comment_digest = 0;  // FNV-1a over raw input bytes
  std::uint64_t post_digest = 0;
};

bool is_sentinel_author(std::string_view author);

// Stream-parse newline-delimited dumps, filter, and index. Malformed and
// missing-field lines are counted and skipped, never fatal. Files ending in
// .zst are decompressed on the fly when zstd support is compiled in.
IngestResult ingest_files(const std::vector<std::string>& comment_paths,
                          const std::vector<std::string>& post_paths,
                          const IngestOptions& options);

}  // namespace iflow

#endif  // INTERESTFLOW_INGEST_HPP_
