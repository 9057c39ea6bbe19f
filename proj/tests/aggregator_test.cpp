#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "iotsdn/aggregator.hpp"

using namespace iotsdn;

namespace {

Aggregator with_topic(const std::string& topic, Bytes buffer = 1000) {
  Aggregator agg("ag1");
  agg.add_topic(Topic{topic, "ag1", 0, buffer});
  return agg;
}

}  // namespace

TEST_CASE("stream drop-tail accounting") {
  TopicStream s(1000);
  s.ingest(400);
  CHECK(s.occupancy() == 400);
  CHECK(s.dropped() == 0);
  s.ingest(500);
  CHECK(s.occupancy() == 900);
  s.ingest(400);
  CHECK(s.occupancy() == 1000);
  CHECK(s.dropped() == 300);
  s.ingest(0);
  CHECK(s.occupancy() == 1000);
  CHECK(s.ingested() == 1300);
  CHECK_THROWS_AS(s.ingest(-1), ValidationError);
  CHECK_THROWS_AS(TopicStream(0), ValidationError);
}

TEST_CASE("a new reader starts at the oldest retained byte") {
  TopicStream s(1000);
  s.ingest(500);
  s.add_reader("a");
  CHECK(s.backlog("a") == 500);
  s.ingest(200);
  CHECK(s.backlog("a") == 700);
  CHECK_THROWS_AS(s.add_reader("a"), DuplicateSubscription);
  CHECK_THROWS_AS(s.backlog("b"), UnknownSubscription);
  CHECK_THROWS_AS(s.remove_reader("b"), UnknownSubscription);
}

TEST_CASE("bytes retire only when every reader consumed them") {
  TopicStream s(1000);
  s.ingest(500);
  s.add_reader("a");
  s.add_reader("b");
  s.consume("a", 300);
  CHECK(s.released() == 0);  // b still holds the head back
  CHECK(s.occupancy() == 500);
  s.consume("b", 100);
  CHECK(s.released() == 100);
  CHECK(s.occupancy() == 400);
  CHECK(s.backlog("a") == 200);
  CHECK(s.backlog("b") == 400);
  CHECK_THROWS_AS(s.consume("a", 201), ValidationError);
  CHECK_THROWS_AS(s.consume("a", -1), ValidationError);

  // Dropping the slow reader lets the head advance to the fast one.
  s.remove_reader("b");
  CHECK(s.released() == 300);
  CHECK(s.occupancy() == 200);
}

TEST_CASE("retired bytes make room for new ingest") {
  TopicStream s(1000);
  s.add_reader("a");
  s.ingest(1000);
  s.consume("a", 600);
  CHECK(s.occupancy() == 400);
  s.ingest(1000);
  CHECK(s.occupancy() == 1000);
  CHECK(s.dropped() == 400);
  CHECK(s.ingested() == s.dropped() + s.occupancy() + s.released());
}

TEST_CASE("topics are homed at exactly one aggregator") {
  Aggregator agg("ag1");
  agg.add_topic(Topic{"t", "ag1", 1, 1000});
  CHECK(agg.has_topic("t"));
  CHECK(agg.topic("t").qos == 1);
  CHECK_THROWS_AS(agg.add_topic(Topic{"u", "ag2", 0, 1000}), ForeignTopic);
  CHECK_THROWS_AS(agg.add_topic(Topic{"t", "ag1", 0, 1000}), ValidationError);
  CHECK_THROWS_AS(agg.topic("u"), UnknownTopic);
  CHECK_THROWS_AS(agg.ingest("u", 10), UnknownTopic);
}

TEST_CASE("grants must name home topics and non-negative rates") {
  Aggregator agg = with_topic("t");
  agg.apply_grants({{{"t", "c:t"}, 1000}});
  CHECK_THROWS_AS(agg.apply_grants({{{"other", "c:other"}, 1000}}),
                  ForeignTopic);
  CHECK_THROWS_AS(agg.apply_grants({{{"t", "c:t"}, -1}}), ValidationError);
}

TEST_CASE("drain follows grant rate and backlog") {
  Aggregator agg = with_topic("t", 2'000'000);
  agg.attach("t", "c:t");
  agg.ingest("t", 1'000'000);

  SUBCASE("rate-limited exactly to the buffer") {
    agg.apply_grants({{{"t", "c:t"}, 8'000'000}});
    std::vector<Emission> out = agg.drain(1000);
    REQUIRE(out.size() == 1);
    CHECK(out[0].subscription == "c:t");
    CHECK(out[0].bytes == 1'000'000);
    CHECK(agg.stream("t").occupancy() == 0);
  }
  SUBCASE("buffer-limited") {
    agg.apply_grants({{{"t", "c:t"}, 8'000'000}});
    agg.drain(1000);
    agg.ingest("t", 100);
    std::vector<Emission> out = agg.drain(1000);
    REQUIRE(out.size() == 1);
    CHECK(out[0].bytes == 100);
  }
  SUBCASE("zero grant emits nothing") {
    agg.apply_grants({{{"t", "c:t"}, 0}});
    std::vector<Emission> out = agg.drain(1000);
    REQUIRE(out.size() == 1);
    CHECK(out[0].bytes == 0);
    CHECK(agg.stream("t").occupancy() == 1'000'000);
  }
  SUBCASE("tick scaling") {
    agg.apply_grants({{{"t", "c:t"}, 8'000'000}});
    std::vector<Emission> out = agg.drain(100);  // 100 ms worth
    REQUIRE(out.size() == 1);
    CHECK(out[0].bytes == 100'000);
  }
}

TEST_CASE("grant table replacement and detach stop emissions") {
  Aggregator agg = with_topic("t", 10'000);
  agg.attach("t", "c:t");
  agg.ingest("t", 5'000);
  agg.apply_grants({{{"t", "c:t"}, 80'000}});
  CHECK(agg.drain(100)[0].bytes == 1'000);

  agg.apply_grants({});
  CHECK(agg.drain(100).empty());

  agg.apply_grants({{{"t", "c:t"}, 80'000}});
  agg.detach("t", "c:t");
  CHECK(agg.drain(100).empty());  // reader gone, grant ignored
}

TEST_CASE("per-topic byte conservation across random traffic") {
  std::mt19937 rng(41);
  Aggregator agg = with_topic("t", 5'000);
  agg.attach("t", "c:t");
  Bytes emitted = 0;
  for (int tick = 0; tick < 300; ++tick) {
    agg.ingest("t", rng() % 400);
    agg.apply_grants({{{"t", "c:t"}, static_cast<BitsPerSecond>(
                                         (rng() % 40) * 800)}});
    for (const Emission& em : agg.drain(100)) {
      emitted += em.bytes;
    }
    const TopicStream& s = agg.stream("t");
    CHECK(s.ingested() == s.dropped() + s.occupancy() + s.released());
    CHECK(s.released() == emitted);  // single reader
    CHECK(s.occupancy() <= s.capacity());
  }
}
