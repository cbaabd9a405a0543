#include <doctest.h>

#include <stdexcept>

#include "cpcmine/io_util.hpp"
#include "test_util.hpp"

using namespace cpcmine;

TEST_CASE("csv line parsing") {
    CHECK(parse_csv_line("a,b,c", "t", 1) == std::vector<std::string>{"a", "b", "c"});
    CHECK(parse_csv_line("\"I, Robot\",x", "t", 1) ==
          std::vector<std::string>{"I, Robot", "x"});
    CHECK(parse_csv_line("a,\"he said \"\"hi\"\"\"", "t", 1) ==
          std::vector<std::string>{"a", "he said \"hi\""});
    CHECK(parse_csv_line("", "t", 1) == std::vector<std::string>{""});
    CHECK(parse_csv_line("a,", "t", 1) == std::vector<std::string>{"a", ""});
    CHECK_THROWS_AS(parse_csv_line("\"unterminated", "t", 1), ParseError);
}

TEST_CASE("csv quoting round trip") {
    for (const std::string field : {"plain", "with,comma", "with \"quote\"", ""}) {
        auto quoted = csv_quote(field);
        auto parsed = parse_csv_line(quoted, "t", 1);
        REQUIRE(parsed.size() == 1);
        CHECK(parsed[0] == field);
    }
}

TEST_CASE("number parsing rejects trailing garbage") {
    CHECK(parse_long("42", "t", 1) == 42);
    CHECK(parse_long("-7", "t", 1) == -7);
    CHECK_THROWS_AS(parse_long("42x", "t", 1), ParseError);
    CHECK_THROWS_AS(parse_long("", "t", 1), ParseError);
    CHECK(parse_double("2.5", "t", 1) == doctest::Approx(2.5));
    CHECK_THROWS_AS(parse_double("nanx", "t", 1), ParseError);
}

TEST_CASE("format_double survives a parse round trip") {
    for (double v : {0.0, 1.0 / 3.0, -2.718281828459045, 1e-17, 123456.789}) {
        auto text = format_double(v);
        CHECK(parse_double(text, "t", 1) == v);
    }
}

TEST_CASE("split and trim") {
    CHECK(split("a\tb\t", '\t') == std::vector<std::string>{"a", "b", ""});
    CHECK(split("", '\t') == std::vector<std::string>{""});
    CHECK(trim("  x \t") == "x");
    CHECK(to_lower("MiXeD") == "mixed");
}

TEST_CASE("for_each_line strips carriage returns and tracks line numbers") {
    std::vector<std::pair<std::size_t, std::string>> seen;
    for_each_line("one\r\ntwo\nthree", [&](std::string_view line, std::size_t n) {
        seen.emplace_back(n, std::string(line));
    });
    REQUIRE(seen.size() == 3);
    CHECK(seen[0] == std::pair<std::size_t, std::string>{1, "one"});
    CHECK(seen[1] == std::pair<std::size_t, std::string>{2, "two"});
    CHECK(seen[2] == std::pair<std::size_t, std::string>{3, "three"});
}

TEST_CASE("digests are stable and content addressed") {
    // FNV-1a 64 of the empty string and of "a" are published constants.
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(digest_bytes("abc") == digest_bytes("abc"));
    CHECK(digest_bytes("abc") != digest_bytes("abd"));

    testutil::TempDir tmp;
    write_text_file(tmp / "f.txt", "payload");
    CHECK(digest_file(tmp / "f.txt") == digest_bytes("payload"));
}

TEST_CASE("read_text_file reports missing files") {
    testutil::TempDir tmp;
    CHECK_THROWS_AS(read_text_file(tmp / "absent.txt"), std::invalid_argument);
}
