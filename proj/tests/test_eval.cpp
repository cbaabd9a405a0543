#include <doctest.h>

#include <random>
#include <set>

#include "cpcmine/eval.hpp"
#include "cpcmine/io_util.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace cpcmine;

namespace {

MergedPair mp(const char* e1, const char* e2, double cpc_value = 1.0) {
    MergedPair p;
    p.e1 = e1;
    p.e2 = e2;
    p.best_cpc = cpc_value;
    p.args1 = {Slot::Person, Slot::None, Slot::None, ""};
    p.args2 = {Slot::Person, Slot::None, Slot::None, ""};
    return p;
}

std::vector<MergedPair> numbered(const char* stem, int n) {
    std::vector<MergedPair> pairs;
    for (int i = 0; i < n; ++i) {
        pairs.push_back(mp((stem + std::to_string(i)).c_str(), "follow"));
    }
    return pairs;
}

// panel of five annotators voting `for_key` times for the keyed option
ResponseTable vote_table(const std::vector<JudgmentItem>& items,
                         const std::map<std::string, char>& keys, int for_key) {
    ResponseTable table;
    for (const auto& item : items) {
        char key = keys.at(item.item_id);
        char other = key == 'A' ? 'B' : 'A';
        for (int a = 0; a < 5; ++a) {
            table[item.item_id]["ann" + std::to_string(a)] =
                std::string(1, a < for_key ? key : other);
        }
    }
    return table;
}

std::map<std::string, char> key_map(const std::vector<JudgmentItem>& items) {
    std::map<std::string, char> keys;
    for (const auto& item : items) {
        keys[item.item_id] = item.hidden_key;
    }
    return keys;
}

}  // namespace

TEST_CASE("worker-facing rendering") {
    MergedPair pair;
    pair.e1 = "clink";
    pair.e2 = "drink";
    pair.args1 = {Slot::Person, Slot::Something, Slot::None, ""};
    pair.args2 = {Slot::Person, Slot::Something, Slot::None, ""};
    CHECK(render_pair(pair) == "[person] clink [smth] - [person] drink [smth]");

    CHECK(render_event("pick", {Slot::Person, Slot::Something, Slot::None, "up"}) ==
          "[person] pick up [smth]");
    CHECK(render_event("fall", {Slot::None, Slot::None, Slot::None, ""}) == "fall");
    // indirect object renders between particle and direct object
    CHECK(render_event("give", {Slot::Person, Slot::Something, Slot::Person, ""}) ==
          "[person] give [person] [smth]");
}

TEST_CASE("high-vs-low item generation") {
    auto high = numbered("high", 6);
    auto low = numbered("low", 10);

    auto items = build_high_vs_low_items(high, low, 42);
    REQUIRE(items.size() == 6);

    std::set<std::string> low_sides;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto& item = items[i];
        CHECK(item.kind == ItemKind::HighVsLow);
        CHECK(item.item_id.substr(0, 3) == "hl-");
        REQUIRE((item.hidden_key == 'A' || item.hidden_key == 'B'));
        const auto& high_text = item.hidden_key == 'A' ? item.option_a : item.option_b;
        const auto& low_text = item.hidden_key == 'A' ? item.option_b : item.option_a;
        CHECK(high_text == render_pair(high[i]));
        low_sides.insert(low_text);
    }
    // low pairs drawn without replacement: all six counterparts distinct
    CHECK(low_sides.size() == 6);

    SUBCASE("same seed reproduces the items exactly") {
        auto again = build_high_vs_low_items(high, low, 42);
        REQUIRE(again.size() == items.size());
        for (std::size_t i = 0; i < items.size(); ++i) {
            CHECK(again[i].item_id == items[i].item_id);
            CHECK(again[i].option_a == items[i].option_a);
            CHECK(again[i].option_b == items[i].option_b);
            CHECK(again[i].hidden_key == items[i].hidden_key);
        }
    }

    SUBCASE("too few low pairs is an error") {
        CHECK_THROWS_AS(build_high_vs_low_items(numbered("h", 3), numbered("l", 2), 1),
                        std::invalid_argument);
    }
}

TEST_CASE("comparison item generation") {
    std::vector<MergedPair> cpc_pairs{
        mp("sit", "eat", 5.0), mp("play", "sing", 4.0), mp("open", "close", 3.0)};
    std::vector<MergedPair> external{
        mp("sit", "drink", 1.0), mp("play", "stop", 1.0), mp("run", "hide", 1.0)};

    SUBCASE("matched pairs become items, unmatched are listed") {
        auto build = build_comparison_items(cpc_pairs, external, 3, 7);
        CHECK(build.items.size() == 2);  // sit and play match; open has no external pair
        REQUIRE(build.unmatched.size() == 1);
        CHECK(build.unmatched[0] == "open");
        for (const auto& item : build.items) {
            CHECK(item.kind == ItemKind::CpcVsExternal);
            REQUIRE((item.hidden_key == 'A' || item.hidden_key == 'B'));
        }
    }

    SUBCASE("first-event lemmas in the sample are distinct") {
        // two cpc pairs share the first event; sampling 2 must keep one of them
        std::vector<MergedPair> dup{mp("sit", "eat", 5.0), mp("sit", "nap", 4.0),
                                    mp("play", "sing", 3.0)};
        auto build = build_comparison_items(dup, external, 2, 11);
        std::set<std::string> firsts;
        for (const auto& item : build.items) {
            // the cpc side is the keyed option; recover its first lemma
            const auto& text = item.hidden_key == 'A' ? item.option_a : item.option_b;
            firsts.insert(text.substr(0, text.find(" - ")));
        }
        CHECK(firsts.size() == build.items.size());
    }

    SUBCASE("oversampling reports the feasible maximum") {
        try {
            build_comparison_items(cpc_pairs, external, 100, 3);
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("max feasible is 3") != std::string::npos);
        }
    }

    SUBCASE("sample size must be positive") {
        CHECK_THROWS_AS(build_comparison_items(cpc_pairs, external, 0, 3),
                        std::invalid_argument);
    }
}

TEST_CASE("type item generation") {
    auto items = build_type_items({mp("push", "fall"), mp("open", "reveal")});
    REQUIRE(items.size() == 2);
    CHECK(items[0].kind == ItemKind::CausalityType);
    CHECK(items[0].item_id == "type-0001");
    CHECK(items[0].option_a == "[person] push - [person] fall");
    CHECK(items[0].option_b.empty());
    CHECK(items[0].hidden_key == 0);
}

TEST_CASE("response grouping rejects duplicate votes") {
    std::vector<Response> rows{{"i1", "ann1", "A"}, {"i1", "ann2", "B"},
                               {"i2", "ann1", "A"}};
    auto table = group_responses(rows);
    CHECK(table.size() == 2);
    CHECK(table.at("i1").at("ann2") == "B");

    rows.push_back({"i1", "ann1", "B"});
    CHECK_THROWS_AS(group_responses(rows), std::invalid_argument);
}

TEST_CASE("choice scoring") {
    auto high = numbered("high", 4);
    auto low = numbered("low", 4);
    auto items = build_high_vs_low_items(high, low, 3);
    auto keys = key_map(items);

    SUBCASE("perfect panels") {
        auto report = score_choice_items(items, keys, vote_table(items, keys, 5));
        CHECK(report.majority_rate == doctest::Approx(1.0));
        CHECK(report.unanimity_rate == doctest::Approx(1.0));
        CHECK(report.alpha_pairwise_mean == doctest::Approx(1.0));
        CHECK(report.items_scored == 4);
        CHECK(report.items_excluded == 0);
    }

    SUBCASE("three of five is a majority but not unanimity") {
        auto report = score_choice_items(items, keys, vote_table(items, keys, 3));
        CHECK(report.majority_rate == doctest::Approx(1.0));
        CHECK(report.unanimity_rate == doctest::Approx(0.0));
    }

    SUBCASE("two of five is no majority") {
        auto report = score_choice_items(items, keys, vote_table(items, keys, 2));
        CHECK(report.majority_rate == doctest::Approx(0.0));
    }

    SUBCASE("majority_rate never drops below unanimity_rate") {
        for (int votes = 0; votes <= 5; ++votes) {
            auto report = score_choice_items(items, keys, vote_table(items, keys, votes));
            CHECK(report.majority_rate >= report.unanimity_rate);
        }
    }

    SUBCASE("short panels are excluded and counted") {
        auto table = vote_table(items, keys, 5);
        table[items[0].item_id].erase("ann4");
        auto report = score_choice_items(items, keys, table);
        CHECK(report.items_scored == 3);
        CHECK(report.items_excluded == 1);
    }

    SUBCASE("responses for unknown items are an error") {
        auto table = vote_table(items, keys, 5);
        table["mystery-item"]["ann1"] = "A";
        CHECK_THROWS_AS(score_choice_items(items, keys, table), std::invalid_argument);
    }

    SUBCASE("labels outside A/B are an error") {
        auto table = vote_table(items, keys, 5);
        table[items[0].item_id]["ann0"] = "C";
        CHECK_THROWS_AS(score_choice_items(items, keys, table), std::invalid_argument);
    }

    SUBCASE("an all-short response set is an error") {
        ResponseTable table;
        table[items[0].item_id]["ann0"] = "A";
        CHECK_THROWS_AS(score_choice_items(items, keys, table), std::invalid_argument);
    }
}

TEST_CASE("type scoring") {
    auto items = build_type_items(numbered("verb", 3));
    ResponseTable table;
    for (const auto& item : items) {
        for (int a = 0; a < 5; ++a) {
            table[item.item_id]["ann" + std::to_string(a)] = "enabling";
        }
    }

    SUBCASE("unanimous enabling panels") {
        auto report = score_type_items(items, table);
        CHECK(report.majority_rate == doctest::Approx(1.0));
        CHECK(report.unanimity_rate == doctest::Approx(1.0));
        CHECK(report.type_distribution ==
              std::map<std::string, long>{{"enabling", 3}});
        CHECK(report.undecided == 0);
    }

    SUBCASE("a 2-2-1 split is undecided and leaves the distribution") {
        table[items[0].item_id] = {{"ann0", "physical"},
                                   {"ann1", "physical"},
                                   {"ann2", "motivational"},
                                   {"ann3", "motivational"},
                                   {"ann4", "enabling"}};
        auto report = score_type_items(items, table);
        CHECK(report.undecided == 1);
        CHECK(report.type_distribution ==
              std::map<std::string, long>{{"enabling", 2}});
        CHECK(report.majority_rate == doctest::Approx(2.0 / 3.0));
    }

    SUBCASE("3-2 splits decide for the 3") {
        table[items[1].item_id] = {{"ann0", "physical"},
                                   {"ann1", "physical"},
                                   {"ann2", "physical"},
                                   {"ann3", "psychological"},
                                   {"ann4", "psychological"}};
        auto report = score_type_items(items, table);
        CHECK(report.type_distribution ==
              std::map<std::string, long>{{"enabling", 2}, {"physical", 1}});
    }

    SUBCASE("labels outside the four types are an error") {
        table[items[0].item_id]["ann0"] = "magical";
        CHECK_THROWS_AS(score_type_items(items, table), std::invalid_argument);
    }
}

TEST_CASE("pairwise alpha") {
    SUBCASE("identical labels with both values present give exactly 1") {
        ResponseTable table;
        for (int i = 0; i < 10; ++i) {
            std::string id = "i" + std::to_string(i);
            std::string label = i % 2 == 0 ? "A" : "B";
            table[id]["x"] = label;
            table[id]["y"] = label;
        }
        CHECK(pairwise_alpha(table) == doctest::Approx(1.0));
    }

    SUBCASE("the hand-computed 2x4 case") {
        ResponseTable table;
        std::vector<std::string> first{"A", "A", "B", "B"};
        std::vector<std::string> second{"A", "B", "A", "B"};
        for (int i = 0; i < 4; ++i) {
            table["i" + std::to_string(i)]["x"] = first[i];
            table["i" + std::to_string(i)]["y"] = second[i];
        }
        CHECK(pairwise_alpha(table) == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(pairwise_alpha(table) ==
              doctest::Approx(oracle::alpha2(first, second)).epsilon(1e-12));
    }

    SUBCASE("systematic disagreement goes nonpositive") {
        ResponseTable table;
        std::vector<std::string> first(6, "A"), second(6, "B");
        for (int i = 0; i < 6; ++i) {
            table["i" + std::to_string(i)]["x"] = first[i];
            table["i" + std::to_string(i)]["y"] = second[i];
        }
        double alpha = pairwise_alpha(table);
        CHECK(alpha <= 0.0);
        CHECK(alpha == doctest::Approx(oracle::alpha2(first, second)).epsilon(1e-12));
    }

    SUBCASE("every two-annotator binary configuration matches the oracle") {
        const char* labels = "AB";
        for (int bits = 0; bits < 256; ++bits) {
            std::vector<std::string> first, second;
            ResponseTable table;
            for (int i = 0; i < 4; ++i) {
                first.emplace_back(1, labels[(bits >> i) & 1]);
                second.emplace_back(1, labels[(bits >> (i + 4)) & 1]);
                table["i" + std::to_string(i)]["x"] = first.back();
                table["i" + std::to_string(i)]["y"] = second.back();
            }
            CHECK(pairwise_alpha(table) ==
                  doctest::Approx(oracle::alpha2(first, second)).epsilon(1e-9));
        }
    }

    SUBCASE("invariant under relabeling") {
        ResponseTable table, renamed;
        std::mt19937 rng(5);
        for (int i = 0; i < 30; ++i) {
            for (const char* ann : {"x", "y", "z"}) {
                bool a = rng() % 2 == 0;
                table["i" + std::to_string(i)][ann] = a ? "A" : "B";
                renamed["i" + std::to_string(i)][ann] = a ? "left" : "right";
            }
        }
        CHECK(pairwise_alpha(table) == doctest::Approx(pairwise_alpha(renamed)));
    }

    SUBCASE("annotator pairs with no shared items drop out") {
        ResponseTable table;
        // x/y share items; z co-labels with neither
        table["i1"] = {{"x", "A"}, {"y", "A"}};
        table["i2"] = {{"x", "B"}, {"y", "B"}};
        table["i3"] = {{"z", "A"}};
        CHECK(pairwise_alpha(table) == doctest::Approx(1.0));
    }

    SUBCASE("fewer than two annotators is an error") {
        ResponseTable table;
        table["i1"]["x"] = "A";
        CHECK_THROWS_AS(pairwise_alpha(table), std::invalid_argument);
        CHECK_THROWS_AS(pairwise_alpha({}), std::invalid_argument);
    }

    SUBCASE("no co-labeled items at all is an error") {
        ResponseTable table;
        table["i1"]["x"] = "A";
        table["i2"]["y"] = "A";
        CHECK_THROWS_AS(pairwise_alpha(table), std::invalid_argument);
    }
}

TEST_CASE("pooled alpha") {
    SUBCASE("matches the pairwise value when there are exactly two annotators") {
        ResponseTable table;
        std::mt19937 rng(17);
        for (int i = 0; i < 25; ++i) {
            table["i" + std::to_string(i)]["x"] = rng() % 2 ? "A" : "B";
            table["i" + std::to_string(i)]["y"] = rng() % 2 ? "A" : "B";
        }
        CHECK(pooled_alpha(table) == doctest::Approx(pairwise_alpha(table)).epsilon(1e-12));
    }

    SUBCASE("perfect three-way agreement is 1") {
        ResponseTable table;
        for (int i = 0; i < 8; ++i) {
            std::string label = i % 2 ? "A" : "B";
            for (const char* ann : {"x", "y", "z"}) {
                table["i" + std::to_string(i)][ann] = label;
            }
        }
        CHECK(pooled_alpha(table) == doctest::Approx(1.0));
    }

    SUBCASE("items with a single label are skipped; none left is an error") {
        ResponseTable table;
        table["i1"]["x"] = "A";
        CHECK_THROWS_AS(pooled_alpha(table), std::invalid_argument);
    }
}

TEST_CASE("random panels have alpha near zero") {
    std::mt19937 rng(2026);
    ResponseTable table;
    for (int i = 0; i < 500; ++i) {
        for (int a = 0; a < 5; ++a) {
            table["i" + std::to_string(i)]["ann" + std::to_string(a)] =
                rng() % 2 ? "A" : "B";
        }
    }
    CHECK(std::abs(pairwise_alpha(table)) < 0.1);
    CHECK(std::abs(pooled_alpha(table)) < 0.1);
}

TEST_CASE("item, key and response files round trip") {
    testutil::TempDir tmp;
    auto items = build_high_vs_low_items(numbered("high", 3), numbered("low", 3), 9);
    write_items_file(tmp / "items.csv", items);
    auto items_back = read_items_file(tmp / "items.csv");
    REQUIRE(items_back.size() == 3);
    CHECK(items_back[0].item_id == items[0].item_id);
    CHECK(items_back[0].kind == items[0].kind);
    CHECK(items_back[0].option_a == items[0].option_a);
    // the worker-facing file never contains the answer
    CHECK(items_back[0].hidden_key == 0);
    CHECK(read_text_file(tmp / "items.csv").find("key") == std::string::npos);

    write_key_file(tmp / "key.csv", items);
    auto keys = read_key_file(tmp / "key.csv");
    CHECK(keys.size() == 3);
    CHECK(keys.at(items[0].item_id) == items[0].hidden_key);

    std::vector<Response> rows{{items[0].item_id, "ann1", "A"},
                               {items[0].item_id, "ann2", "B"}};
    write_responses_file(tmp / "resp.csv", rows);
    auto rows_back = read_responses_file(tmp / "resp.csv");
    REQUIRE(rows_back.size() == 2);
    CHECK(rows_back[0].item_id == rows[0].item_id);
    CHECK(rows_back[1].label == "B");

    SUBCASE("type items write a none key") {
        auto type_items = build_type_items(numbered("v", 2));
        write_key_file(tmp / "tkey.csv", type_items);
        auto tkeys = read_key_file(tmp / "tkey.csv");
        CHECK(tkeys.at("type-0001") == 0);
    }

    SUBCASE("wrong headers are rejected") {
        write_text_file(tmp / "bad_items.csv", "id,kind\n");
        CHECK_THROWS_AS(read_items_file(tmp / "bad_items.csv"), ParseError);
        write_text_file(tmp / "bad_key.csv", "item,answer\nx,A\n");
        CHECK_THROWS_AS(read_key_file(tmp / "bad_key.csv"), ParseError);
        write_text_file(tmp / "bad_resp.csv", "who,what\n");
        CHECK_THROWS_AS(read_responses_file(tmp / "bad_resp.csv"), ParseError);
    }
}

TEST_CASE("agreement reports serialize to json") {
    AgreementReport report;
    report.majority_rate = 0.75;
    report.unanimity_rate = 0.25;
    report.alpha_pairwise_mean = 0.5;
    report.items_scored = 4;
    report.type_distribution["enabling"] = 2;
    auto text = agreement_report_json(report);
    CHECK(text.find("\"majority_rate\"") != std::string::npos);
    CHECK(text.find("\"alpha_pairwise_mean\"") != std::string::npos);
    CHECK(text.find("\"enabling\"") != std::string::npos);
    CHECK(text.back() == '\n');
}
