#include <sstream>

#include "doctest.h"
#include "interestflow/catalog.hpp"
#include "interestflow/errors.hpp"

using namespace iflow;

TEST_CASE("topic class names round-trip") {
  for (int i = 0; i < kTopicClassCount; ++i) {
    const auto t = static_cast<TopicClass>(i);
    const auto back = topic_class_from_string(to_string(t));
    REQUIRE(back.has_value());
    CHECK(*back == t);
  }
  CHECK(!topic_class_from_string("NotATopic").has_value());
}

TEST_CASE("catalog parses header, booleans, and preserves axis order") {
  std::istringstream in(
      "subreddit,topic_class,included,exotic_rules\n"
      "soccer,Sport,true,false\n"
      "counting,Others,1,1\n"
      "excludedsub,HumorMemes,false,0\n"
      "recipes,FoodHealth,true,false\n");
  const SubredditCatalog cat = parse_catalog(in);
  CHECK(cat.size() == 4);
  CHECK(cat.dimension() == 3);
  REQUIRE(cat.included_order().size() == 3);
  CHECK(cat.included_order()[0] == "soccer");
  CHECK(cat.included_order()[1] == "counting");
  CHECK(cat.included_order()[2] == "recipes");
  CHECK(cat.axis_index("recipes") == std::size_t{2});
  CHECK(!cat.axis_index("excludedsub").has_value());
  CHECK(!cat.axis_index("nosuch").has_value());

  const CatalogEntry* counting = cat.find("counting");
  REQUIRE(counting != nullptr);
  CHECK(counting->topic_class == TopicClass::Others);
  CHECK(counting->exotic_rules);
  CHECK(cat.is_included("soccer"));
  CHECK(!cat.is_included("excludedsub"));
}

TEST_CASE("uncataloged lookup is a defined miss") {
  SubredditCatalog cat;
  CHECK(cat.find("anything") == nullptr);
  CHECK(!cat.is_included("anything"));
}

TEST_CASE("duplicate subreddits are rejected") {
  std::istringstream in(
      "subreddit,topic_class,included,exotic_rules\n"
      "soccer,Sport,true,false\n"
      "soccer,Others,true,false\n");
  CHECK_THROWS_AS(parse_catalog(in), DuplicateEntry);
}

TEST_CASE("unknown topic labels are rejected") {
  std::istringstream in(
      "subreddit,topic_class,included,exotic_rules\n"
      "soccer,Sports,true,false\n");
  CHECK_THROWS_AS(parse_catalog(in), UnknownTopicClass);
}

TEST_CASE("missing catalog file raises IoError") {
  CHECK_THROWS_AS(load_catalog("/nonexistent/catalog.csv"), IoError);
}
