#include <doctest.h>

#include "cpcmine/annotation.hpp"
#include "cpcmine/io_util.hpp"
#include "test_util.hpp"

using namespace cpcmine;

namespace {

const char* kTwoScenes =
    "# scene film_a\t0\n"
    "1\tJoe\tJoe\tNNP\t2\tnsubj\tPERSON\n"
    "2\tran\trun\tVBD\t0\troot\tO\n"
    "\n"
    "1\tHe\the\tPRP\t2\tnsubj\tO\n"
    "2\tfell\tfall\tVBD\t0\troot\tO\n"
    "\n"
    "# scene film_a\t1\n"
    "1\tJoe\tJoe\tNNP\t2\tnsubj\tPERSON\n"
    "2\tstood\tstand\tVBD\t0\troot\tO\n";

}  // namespace

TEST_CASE("parses scenes, sentences and tokens") {
    auto docs = parse_annotation_text(kTwoScenes, "t", "fallback");
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].film_id == "film_a");
    CHECK(docs[0].scene_ordinal == 0);
    REQUIRE(docs[0].sentences.size() == 2);
    CHECK(docs[1].scene_ordinal == 1);
    REQUIRE(docs[1].sentences.size() == 1);

    const auto& tok = docs[0].sentences[0][1];
    CHECK(tok.index == 2);
    CHECK(tok.surface == "ran");
    CHECK(tok.lemma == "run");
    CHECK(tok.pos == "VBD");
    CHECK(tok.head == 0);
    CHECK(tok.deprel == "root");
    CHECK(tok.ner == "O");
}

TEST_CASE("headerless text becomes one scene with the default film id") {
    auto docs = parse_annotation_text("1\tGo\tgo\tVB\t0\troot\tO\n", "t", "my_film");
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].film_id == "my_film");
    CHECK(docs[0].scene_ordinal == 0);
    REQUIRE(docs[0].sentences.size() == 1);
}

TEST_CASE("comment lines are skipped") {
    auto docs = parse_annotation_text(
        "# a note\n1\tGo\tgo\tVB\t0\troot\tO\n# another\n", "t", "f");
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].sentences.size() == 1);
}

TEST_CASE("malformed input is rejected with the offending line") {
    // six fields
    CHECK_THROWS_AS(parse_annotation_text("1\ta\ta\tNN\t0\troot\n", "t", "f"), ParseError);
    // head pointing at the token itself
    CHECK_THROWS_AS(
        parse_annotation_text("1\ta\ta\tNN\t1\tdep\tO\n", "t", "f"), ParseError);
    // negative scene ordinal
    CHECK_THROWS_AS(
        parse_annotation_text("# scene f\t-1\n1\ta\ta\tNN\t0\troot\tO\n", "t", "f"),
        ParseError);
    // non-numeric scene ordinal
    CHECK_THROWS_AS(
        parse_annotation_text("# scene f\tx\n1\ta\ta\tNN\t0\troot\tO\n", "t", "f"),
        ParseError);
    // zero token index
    CHECK_THROWS_AS(
        parse_annotation_text("0\ta\ta\tNN\t0\troot\tO\n", "t", "f"), ParseError);
    try {
        parse_annotation_text("1\ta\ta\tNN\t0\troot\n", "t", "f");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("t:1") != std::string::npos);
    }
}

TEST_CASE("render and reparse is the identity") {
    auto docs = parse_annotation_text(kTwoScenes, "t", "f");
    auto again = parse_annotation_text(render_annotation(docs), "t2", "f");
    CHECK(docs == again);
}

TEST_CASE("annotation files round trip") {
    testutil::TempDir tmp;
    auto docs = parse_annotation_text(kTwoScenes, "t", "f");
    write_annotation_file(tmp / "scenes.tsv", docs);
    CHECK(parse_annotation_file(tmp / "scenes.tsv") == docs);
}

TEST_CASE("store files round trip and validate their format") {
    testutil::TempDir tmp;
    auto docs = parse_annotation_text(kTwoScenes, "t", "f");
    write_store(tmp / "store.json", docs);
    CHECK(read_store(tmp / "store.json") == docs);

    write_text_file(tmp / "bad.json", "{\"format\": \"something-else\"}");
    CHECK_THROWS_AS(read_store(tmp / "bad.json"), ParseError);
    write_text_file(tmp / "garbled.json", "{not json");
    CHECK_THROWS_AS(read_store(tmp / "garbled.json"), ParseError);
}
