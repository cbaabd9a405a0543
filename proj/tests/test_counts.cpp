#include <doctest.h>

#include <cmath>
#include <random>

#include "cpcmine/counts.hpp"
#include "cpcmine/io_util.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace cpcmine;

namespace {

EventInstance ev(const char* lemma, const char* film, long scene, long index) {
    EventInstance e;
    e.lemma = lemma;
    e.film_id = film;
    e.scene_ordinal = scene;
    e.linear_index = index;
    return e;
}

using Key = std::pair<std::string, std::string>;

}  // namespace

TEST_CASE("window mode names round trip") {
    CHECK(window_mode_name(WindowMode::Cumulative) == "cumulative");
    CHECK(window_mode_name(WindowMode::Exact) == "exact");
    CHECK(window_mode_from_name("cumulative") == WindowMode::Cumulative);
    CHECK(window_mode_from_name("exact") == WindowMode::Exact);
    CHECK_THROWS_AS(window_mode_from_name("sliding"), std::invalid_argument);
}

TEST_CASE("scene streams group by film and scene in stream order") {
    std::vector<EventInstance> events{
        ev("b", "f1", 0, 1), ev("a", "f1", 0, 0),
        ev("c", "f2", 0, 2), ev("d", "f1", 1, 3),
    };
    auto streams = scene_streams(events);
    REQUIRE(streams.size() == 3);
    // (f1,0) ordered by linear index, then (f1,1), then (f2,0)
    CHECK(streams[0] == std::vector<std::string>{"a", "b"});
    CHECK(streams[1] == std::vector<std::string>{"d"});
    CHECK(streams[2] == std::vector<std::string>{"c"});
}

TEST_CASE("filter_scope keeps only the scope's films") {
    std::vector<EventInstance> events{ev("a", "f1", 0, 0), ev("b", "f2", 0, 1)};
    AnalysisScope scope{"G", {"f2"}};
    auto kept = filter_scope(events, scope);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].lemma == "b");
}

TEST_CASE("hand-counted window tables") {
    std::vector<std::vector<std::string>> scenes{{"a", "b", "a", "b"}};

    SUBCASE("window 1 counts adjacent ordered pairs") {
        auto tables = count_scope(scenes, 1);
        REQUIRE(tables.size() == 1);
        const auto& t = tables[0];
        CHECK(t.window == 1);
        CHECK(t.total_events == 4);
        CHECK(t.total_ordered_pairs == 3);
        CHECK(t.unigram.at("a") == 2);
        CHECK(t.unigram.at("b") == 2);
        CHECK(t.observed("a", "b") == 2);
        CHECK(t.observed("b", "a") == 1);
        CHECK(t.observed("b", "b") == 0);
    }

    SUBCASE("cumulative window 2 includes distance 1 and 2") {
        auto tables = count_scope(scenes, 2, WindowMode::Cumulative);
        const auto& t = tables[1];
        CHECK(t.total_ordered_pairs == 5);  // 3 at distance 1, 2 at distance 2
        CHECK(t.observed("a", "b") == 2);
        CHECK(t.observed("a", "a") == 1);
        CHECK(t.observed("b", "b") == 1);
    }

    SUBCASE("exact window 2 keeps distance 2 only") {
        auto tables = count_scope(scenes, 2, WindowMode::Exact);
        const auto& t = tables[1];
        CHECK(t.total_ordered_pairs == 2);
        CHECK(t.observed("a", "a") == 1);
        CHECK(t.observed("b", "b") == 1);
        CHECK(t.observed("a", "b") == 0);
    }
}

TEST_CASE("windows never cross scene boundaries") {
    std::vector<std::vector<std::string>> joined{{"a", "b"}};
    std::vector<std::vector<std::string>> separate{{"a"}, {"b"}};
    auto t_joined = count_scope(joined, 3)[2];
    auto t_separate = count_scope(separate, 3)[2];
    CHECK(t_joined.observed("a", "b") == 1);
    CHECK(t_separate.observed("a", "b") == 0);
    CHECK(t_separate.total_ordered_pairs == 0);
    CHECK(t_separate.total_events == 2);
}

TEST_CASE("self pairs are counted") {
    auto tables = count_scope({{"a", "a"}}, 1);
    CHECK(tables[0].observed("a", "a") == 1);
}

TEST_CASE("counting is invariant under scene order") {
    std::vector<std::vector<std::string>> fwd{{"a", "b", "c"}, {"b", "c"}};
    std::vector<std::vector<std::string>> rev{{"b", "c"}, {"a", "b", "c"}};
    auto ta = count_scope(fwd, 2);
    auto tb = count_scope(rev, 2);
    for (std::size_t w = 0; w < ta.size(); ++w) {
        CHECK(ta[w].unigram == tb[w].unigram);
        CHECK(ta[w].ordered_pair == tb[w].ordered_pair);
        CHECK(ta[w].total_ordered_pairs == tb[w].total_ordered_pairs);
    }
}

TEST_CASE("random streams match the explicit-enumeration oracle") {
    std::mt19937 rng(4242);
    for (int round = 0; round < 50; ++round) {
        auto scenes = oracle::random_scenes(rng);
        for (auto mode : {WindowMode::Cumulative, WindowMode::Exact}) {
            auto tables = count_scope(scenes, 3, mode);
            for (int w = 1; w <= 3; ++w) {
                auto expect = oracle::count(scenes, w, mode == WindowMode::Cumulative);
                const auto& got = tables[w - 1];
                CHECK(got.total_events == expect.events);
                CHECK(got.total_ordered_pairs == expect.pairs);
                CHECK(got.unigram == expect.unigram);
                CHECK(got.ordered_pair == expect.pair);
            }
        }
    }
}

TEST_CASE("estimators and smoothing") {
    auto tables = count_scope({{"a", "b", "a", "b"}}, 1);
    const auto& t = tables[0];

    CHECK(t.smoothed_count("a", "b") == 2);
    CHECK(t.smoothed_count("b", "b") == 1);  // unseen ordering smoothed to 1
    CHECK_THROWS_AS(t.smoothed_count("a", "zz"), std::invalid_argument);

    CHECK(t.p_event("a") == doctest::Approx(0.5));
    CHECK(t.p_ordered("a", "b") == doctest::Approx(2.0 / 3.0));
    CHECK(t.p_joint("a", "b") == doctest::Approx(3.0 / 3.0));
    // self pair collapses to one smoothed term
    CHECK(t.p_joint("a", "a") == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(t.p_event("zz"), std::invalid_argument);
}

TEST_CASE("count store round trips through a directory") {
    testutil::TempDir tmp;
    std::vector<PairCountTable> tables;
    for (const auto& scope : {"Action", "ALL"}) {
        auto scoped = count_scope({{"a", "b", "a"}}, 2, WindowMode::Cumulative, scope);
        tables.insert(tables.end(), scoped.begin(), scoped.end());
    }
    write_count_tables(tmp.path, tables);

    auto loaded = read_count_tables(tmp.path);
    REQUIRE(loaded.size() == 2);
    REQUIRE(loaded.count("Action") == 1);
    REQUIRE(loaded.at("Action").size() == 2);
    const auto& t = loaded.at("Action")[0];
    CHECK(t.scope == "Action");
    CHECK(t.window == 1);
    CHECK(t.mode == WindowMode::Cumulative);
    CHECK(t.unigram == std::map<std::string, long>{{"a", 2}, {"b", 1}});
    CHECK(t.ordered_pair ==
          std::map<Key, long>{{{"a", "b"}, 1}, {{"b", "a"}, 1}});
    CHECK(t.total_events == 3);
    CHECK(t.total_ordered_pairs == 2);

    SUBCASE("missing unigram file is detected") {
        std::filesystem::remove(tmp.path / (sanitize_scope_filename("Action") +
                                            ".unigrams.tsv"));
        CHECK_THROWS_AS(read_count_tables(tmp.path), std::invalid_argument);
    }

    SUBCASE("window gaps are detected") {
        std::filesystem::remove(tmp.path / (sanitize_scope_filename("Action") +
                                            "__w1.pairs.tsv"));
        CHECK_THROWS_AS(read_count_tables(tmp.path), std::invalid_argument);
    }
}

TEST_CASE("scope names with path characters get sanitized file names") {
    auto name = sanitize_scope_filename("Sci/Fi Noir");
    CHECK(name.find('/') == std::string::npos);
    CHECK(name.find(' ') == std::string::npos);
}

TEST_CASE("w_max must be at least one") {
    CHECK_THROWS_AS(count_scope({{"a"}}, 0), std::invalid_argument);
}
