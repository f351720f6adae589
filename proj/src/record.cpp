#include "interestflow/record.hpp"

#include <json.hpp>

#include <charconv>

#include "interestflow/errors.hpp"

namespace iflow {

using nlohmann::json;

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    n += (c & 0xC0u) != 0x80u;
  }
  return n;
}

namespace {

const json& require_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw MissingField(std::string("missing required key: ") + key);
  }
  return *it;
}

std::string get_string(const json& j, const char* key) {
  const json& v = require_field(j, key);
  if (!v.is_string()) {
    throw MalformedRecord(std::string(key) + " is not a string");
  }
  return v.get<std::string>();
}

// Dump archives are inconsistent about created_utc: integer, float, or a
// decimal string all occur in the wild.
std::int64_t get_timestamp(const json& j) {
  const json& v = require_field(j, "created_utc");
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_unsigned()) return static_cast<std::int64_t>(v.get<std::uint64_t>());
  if (v.is_number_float()) return static_cast<std::int64_t>(v.get<double>());
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return out;
  }
  throw MalformedRecord("created_utc is not a usable timestamp");
}

json parse_object(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw MalformedRecord("line is not a JSON object");
  }
  return j;
}

void check_identity(const std::string& author, const std::string& subreddit,
                    std::int64_t created_utc) {
  if (author.empty() || subreddit.empty()) {
    throw MalformedRecord("empty author or subreddit");
  }
  if (created_utc <= 0) {
    throw MalformedRecord("nonpositive created_utc");
  }
}

}  // namespace

CommentRecord parse_comment(std::string_view line) {
  json j = parse_object(line);
  CommentRecord rec;
  rec.author = get_string(j, "author");
  rec.subreddit = get_string(j, "subreddit");
  rec.created_utc = get_timestamp(j);
  check_identity(rec.author, rec.subreddit, rec.created_utc);

  std::string body = get_string(j, "body");
  if (!body.empty() && body.back() == '\n') body.pop_back();
  rec.body_length = static_cast<std::uint32_t>(utf8_length(body));

  rec.comment_id = get_string(j, "id");
  rec.parent_post_id = get_string(j, "link_id");
  return rec;
}

PostRecord parse_post(std::string_view line) {
  json j = parse_object(line);
  PostRecord rec;
  rec.author = get_string(j, "author");
  rec.subreddit = get_string(j, "subreddit");
  rec.created_utc = get_timestamp(j);
  check_identity(rec.author, rec.subreddit, rec.created_utc);
  rec.post_id = get_string(j, "id");
  return rec;
}

}  // namespace iflow
