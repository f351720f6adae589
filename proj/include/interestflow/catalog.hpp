#ifndef INTERESTFLOW_CATALOG_HPP_
#define INTERESTFLOW_CATALOG_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace iflow {

// The 15 hand-assigned topic classes. Names are the CSV-safe concatenated
// forms ("NewsPoliticsSociety", not "News, Politics, Society").
enum class TopicClass : std::uint8_t {
  Sport,
  FoodHealth,
  ComicsGames,
  NewsPoliticsSociety,
  ScienceTechnology,
  LifetipsAdvice,
  HumorMemes,
  BooksMoviesMusic,
  ImagesVideos,
  FashionLifestyle,
  StoriesEverydayLife,
  HowToHobbies,
  ArtMusicSoftSciences,
  Places,
  Others,
};

inline constexpr int kTopicClassCount = 15;

std::string_view to_string(TopicClass t);
std::optional<TopicClass> topic_class_from_string(std::string_view name);

struct CatalogEntry {
  TopicClass topic_class = TopicClass::Others;
  bool included = true;
  // Communities whose posting rules force degenerate comments (e.g.
  // single-letter replies); excluded from comment-length entropy.
  bool exotic_rules = false;
};

struct TransparentStringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// Subreddit -> topic/inclusion table. Lookup of an uncataloged subreddit is a
// defined miss (nullptr), never an error. The included entries, in file
// order, fix the activity-vector axis used by the concentration analysis.
class SubredditCatalog {
 public:
  void add(std::string name, CatalogEntry entry);  // throws DuplicateEntry

  const CatalogEntry* find(std::string_view name) const;
  bool is_included(std::string_view name) const;

  const std::vector<std::string>& included_order() const { return included_order_; }
  std::optional<std::size_t> axis_index(std::string_view name) const;
  std::size_t dimension() const { return included_order_.size(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, CatalogEntry, TransparentStringHash,
                     std::equal_to<>>
      entries_;
  std::vector<std::string> included_order_;
  std::unordered_map<std::string, std::size_t, TransparentStringHash,
                     std::equal_to<>>
      axis_;
};

// Catalog file: delimited table with header
//   subreddit,topic_class,included,exotic_rules
// Booleans accept true/false/1/0. Duplicate subreddits and unknown topic
// labels are errors.
SubredditCatalog parse_catalog(std::istream& in);
SubredditCatalog load_catalog(const std::string& path);

}  // namespace iflow

#endif  // INTERESTFLOW_CATALOG_HPP_
