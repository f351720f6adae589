#ifndef INTERESTFLOW_RECORD_HPP_
#define INTERESTFLOW_RECORD_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace iflow {

enum class RecordKind : std::uint8_t { comment, post };

// One ingested comment. body_length is the character (code point) count of
// the raw body after stripping a single trailing newline; the body text
// itself is not retained.
struct CommentRecord {
  std::string author;
  std::string subreddit;
  std::int64_t created_utc = 0;
  std::uint32_t body_length = 0;
  std::string comment_id;
  std::string parent_post_id;
};

struct PostRecord {
  std::string author;
  std::string subreddit;
  std::int64_t created_utc = 0;
  std::string post_id;
};

// Number of code points in a UTF-8 string (continuation bytes not counted).
std::size_t utf8_length(std::string_view s);

// Parse one newline-delimited JSON record. Throws MalformedRecord for
// unparseable lines or invariant violations (nonpositive timestamp, empty
// author/subreddit) and MissingField when a required key is absent.
// Required keys: author, subreddit, created_utc, body, id, link_id (comments)
// and author, subreddit, created_utc, id (posts).
CommentRecord parse_comment(std::string_view line);
PostRecord parse_post(std::string_view line);

}  // namespace iflow

#endif  // INTERESTFLOW_RECORD_HPP_
