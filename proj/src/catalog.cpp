#include "interestflow/catalog.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "interestflow/errors.hpp"

namespace iflow {

namespace {

constexpr std::array<std::string_view, kTopicClassCount> kTopicNames = {
    "Sport",
    "FoodHealth",
    "ComicsGames",
    "NewsPoliticsSociety",
    "ScienceTechnology",
    "LifetipsAdvice",
    "HumorMemes",
    "BooksMoviesMusic",
    "ImagesVideos",
    "FashionLifestyle",
    "StoriesEverydayLife",
    "HowToHobbies",
    "ArtMusicSoftSciences",
    "Places",
    "Others",
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

bool parse_bool(std::string_view s, const std::string& context) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw MalformedRecord("catalog: bad boolean '" + std::string(s) + "' in " + context);
}

}  // namespace

std::string_view to_string(TopicClass t) {
  return kTopicNames[static_cast<std::size_t>(t)];
}

std::optional<TopicClass> topic_class_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kTopicNames.size(); ++i) {
    if (kTopicNames[i] == name) return static_cast<TopicClass>(i);
  }
  return std::nullopt;
}

void SubredditCatalog::add(std::string name, CatalogEntry entry) {
  auto [it, inserted] = entries_.emplace(name, entry);
  if (!inserted) {
    throw DuplicateEntry("duplicate catalog entry: " + name);
  }
  if (entry.included) {
    axis_.emplace(name, included_order_.size());
    included_order_.push_back(std::move(name));
  }
}

const CatalogEntry* SubredditCatalog::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

bool SubredditCatalog::is_included(std::string_view name) const {
  const CatalogEntry* e = find(name);
  return e != nullptr && e->included;
}

std::optional<std::size_t> SubredditCatalog::axis_index(std::string_view name) const {
  auto it = axis_.find(name);
  if (it == axis_.end()) return std::nullopt;
  return it->second;
}

SubredditCatalog parse_catalog(std::istream& in) {
  SubredditCatalog catalog;
  std::string line;
  if (!std::getline(in, line)) {
    throw MalformedRecord("catalog: empty file");
  }
  auto header = split_line(line);
  if (header.size() != 4 || header[0] != "subreddit" || header[1] != "topic_class" ||
      header[2] != "included" || header[3] != "exotic_rules") {
    throw MalformedRecord(
        "catalog: expected header 'subreddit,topic_class,included,exotic_rules'");
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != 4) {
      throw MalformedRecord("catalog: line " + std::to_string(line_no) +
                            " has " + std::to_string(fields.size()) + " fields");
    }
    if (fields[0].empty()) {
      throw MalformedRecord("catalog: empty subreddit at line " + std::to_string(line_no));
    }
    auto topic = topic_class_from_string(fields[1]);
    if (!topic) {
      throw UnknownTopicClass("unknown topic class '" + std::string(fields[1]) +
                              "' at line " + std::to_string(line_no));
    }
    CatalogEntry entry;
    entry.topic_class = *topic;
    entry.included = parse_bool(fields[2], "line " + std::to_string(line_no));
    entry.exotic_rules = parse_bool(fields[3], "line " + std::to_string(line_no));
    catalog.add(std::string(fields[0]), entry);
  }
  return catalog;
}

SubredditCatalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open catalog file: " + path);
  }
  return parse_catalog(in);
}

}  // namespace iflow
