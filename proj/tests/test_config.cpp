#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "gbmlab/common.hpp"
#include "gbmlab/config.hpp"

using namespace gbmlab;
using doctest::Approx;

namespace {
const char* kSample =
    "# experiment description\n"
    "[experiment]\n"
    "kind = gheat\n"
    "seed = 42\n"
    "\n"
    "[grid]\n"
    "horizon = 1.5\n"
    "n_steps = 64\n"
    "\n"
    "[gheat]\n"
    "payoff = square_plus(0.1)\n"
    "widths = 0.1 0.01 1e-3\n"
    "verbose = yes\n";
}

TEST_CASE("typed accessors read values and fallbacks") {
    Config cfg = Config::parse_text(kSample, "sample.cfg");
    CHECK(cfg.origin() == "sample.cfg");
    CHECK(cfg.has("experiment", "kind"));
    CHECK(!cfg.has("experiment", "out"));
    CHECK(cfg.get_string("experiment", "kind") == "gheat");
    CHECK(cfg.get_string("experiment", "out", ".") == ".");
    CHECK(cfg.get_int("experiment", "seed") == 42);
    CHECK(cfg.get_int("experiment", "missing", 7) == 7);
    CHECK(cfg.get_double("grid", "horizon") == Approx(1.5));
    CHECK(cfg.get_double("grid", "absent", 2.5) == Approx(2.5));
    CHECK(cfg.get_bool("gheat", "verbose", false));
    CHECK(cfg.get_bool("gheat", "quiet", true));

    const auto widths = cfg.get_doubles("gheat", "widths");
    REQUIRE(widths.size() == 3);
    CHECK(widths[0] == Approx(0.1));
    CHECK(widths[2] == Approx(1e-3));

    cfg.get_int("grid", "n_steps");
    cfg.get_string("gheat", "payoff");
    CHECK_NOTHROW(cfg.require_all_consumed());
}

TEST_CASE("unknown keys are reported by section and name") {
    Config cfg = Config::parse_text(kSample, "sample.cfg");
    cfg.get_string("experiment", "kind");
    CHECK_THROWS_WITH_AS(cfg.require_all_consumed(),
                         doctest::Contains("unknown config key(s):"), ValidationError);
    try {
        cfg.require_all_consumed();
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        CHECK(what.find("sample.cfg") != std::string::npos);
        CHECK(what.find("experiment.seed") != std::string::npos);
        CHECK(what.find("gheat.widths") != std::string::npos);
        CHECK(what.find("experiment.kind") == std::string::npos);
    }
}

TEST_CASE("has() probes without consuming") {
    Config cfg = Config::parse_text("[a]\nx = 1\n");
    CHECK(cfg.has("a", "x"));
    CHECK_THROWS_WITH_AS(cfg.require_all_consumed(), doctest::Contains("a.x"), ValidationError);
}

TEST_CASE("entries keep file order and set() replaces or appends") {
    Config cfg = Config::parse_text(kSample);
    auto entries = cfg.entries();
    REQUIRE(entries.size() == 7);
    CHECK(std::get<0>(entries[0]) == "experiment");
    CHECK(std::get<1>(entries[0]) == "kind");
    CHECK(std::get<1>(entries[2]) == "horizon");
    CHECK(std::get<2>(entries[1]) == "42");

    cfg.set("experiment", "seed", "99");
    cfg.set("experiment", "out", "results");
    entries = cfg.entries();
    REQUIRE(entries.size() == 8);
    CHECK(std::get<2>(entries[1]) == "99");           // replaced in place
    CHECK(std::get<0>(entries.back()) == "experiment");  // appended at the end
    CHECK(std::get<1>(entries.back()) == "out");
}

TEST_CASE("parse errors carry the origin and line number") {
    CHECK_THROWS_WITH_AS(Config::parse_text("[grid\nh = 1\n", "g.cfg"),
                         doctest::Contains("g.cfg:1: unterminated section header"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(Config::parse_text("[2bad]\n", "g.cfg"),
                         doctest::Contains("bad section name"), ValidationError);
    CHECK_THROWS_WITH_AS(Config::parse_text("x = 1\n", "g.cfg"),
                         doctest::Contains("appears before any [section]"), ValidationError);
    CHECK_THROWS_WITH_AS(Config::parse_text("[a]\njust words\n", "g.cfg"),
                         doctest::Contains("g.cfg:2: expected 'key = value'"), ValidationError);
    CHECK_THROWS_WITH_AS(Config::parse_text("[a]\n9k = 1\n", "g.cfg"),
                         doctest::Contains("bad key '9k'"), ValidationError);
    CHECK_THROWS_WITH_AS(Config::parse_text("[a]\nx =\n", "g.cfg"),
                         doctest::Contains("has an empty value"), ValidationError);
    CHECK_THROWS_WITH_AS(Config::parse_text("[a]\nx = 1\nx = 2\n", "g.cfg"),
                         doctest::Contains("duplicate key 'a.x'"), ValidationError);
    CHECK_THROWS_WITH_AS(Config::parse_text("[a]\nx = 1\n[b]\ny = 2\n[a]\nx = 3\n", "g.cfg"),
                         doctest::Contains("duplicate key 'a.x'"), ValidationError);
}

TEST_CASE("typed accessor failures name the key") {
    Config cfg = Config::parse_text("[a]\nx = fast\nn = 1.5\nb = maybe\nv = one two\n");
    CHECK_THROWS_WITH_AS(cfg.get_double("a", "x"), doctest::Contains("not a number"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(cfg.get_int("a", "n"), doctest::Contains("not an integer"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(cfg.get_bool("a", "b", false), doctest::Contains("not a boolean"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(cfg.get_doubles("a", "v"), doctest::Contains("not a number"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(cfg.get_string("a", "gone"),
                         doctest::Contains("missing required key 'a.gone'"), ValidationError);
}

TEST_CASE("boolean spellings") {
    Config cfg = Config::parse_text("[f]\na = true\nb = yes\nc = 1\nd = false\ne = no\ng = 0\n");
    CHECK(cfg.get_bool("f", "a", false));
    CHECK(cfg.get_bool("f", "b", false));
    CHECK(cfg.get_bool("f", "c", false));
    CHECK(!cfg.get_bool("f", "d", true));
    CHECK(!cfg.get_bool("f", "e", true));
    CHECK(!cfg.get_bool("f", "g", true));
}

TEST_CASE("catalog selector parsing") {
    CatalogCall plain = parse_catalog_call("square");
    CHECK(plain.name == "square");
    CHECK(plain.args.empty());

    CatalogCall one = parse_catalog_call(" linear(2.5) ");
    CHECK(one.name == "linear");
    REQUIRE(one.args.size() == 1);
    CHECK(one.args[0] == Approx(2.5));

    CatalogCall two = parse_catalog_call("affine_drift(-0.8, 0.3)");
    CHECK(two.name == "affine_drift");
    REQUIRE(two.args.size() == 2);
    CHECK(two.args[0] == Approx(-0.8));
    CHECK(two.args[1] == Approx(0.3));

    CHECK_THROWS_WITH_AS(parse_catalog_call("linear(2"), doctest::Contains("must end with ')'"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(parse_catalog_call("linear(a)"), doctest::Contains("not a number"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(parse_catalog_call("2bad"), doctest::Contains("bad catalog selector"),
                         ValidationError);
}

TEST_CASE("parse_file reads from disk and reports missing files") {
    const std::string path = "test_config_tmp.cfg";
    {
        std::ofstream out(path);
        out << "[experiment]\nkind = bihari\n";
    }
    Config cfg = Config::parse_file(path);
    CHECK(cfg.origin() == path);
    CHECK(cfg.get_string("experiment", "kind") == "bihari");
    std::remove(path.c_str());

    CHECK_THROWS_WITH_AS(Config::parse_file("definitely_missing.cfg"),
                         doctest::Contains("cannot read config file"), ValidationError);
}
