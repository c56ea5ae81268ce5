#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "advtest/io.hpp"

using namespace advtest;

namespace {

const char* kShippedClasses[] = {
    "instances/coin/interval_p.cls",
    "instances/coin/interval_q.cls",
    "instances/coin/singleton_p.cls",
    "instances/coin/singleton_q.cls",
};

const char* kShippedStates[] = {
    "instances/quantum/r1.qst",      "instances/quantum/r2.qst",
    "instances/quantum/s1.qst",      "instances/quantum/s2.qst",
    "instances/quantum/witness_rho.qst", "instances/quantum/witness_sigma.qst",
    "instances/quantum/superadd_rho.qst", "instances/quantum/superadd_sigma.qst",
};

}  // namespace

TEST_CASE("shipped class files round trip exactly") {
    for (const char* path : kShippedClasses) {
        INFO(path);
        const auto cls = load_class(path);
        std::istringstream round(serialize_class(cls));
        const auto again = parse_class(path, round);
        REQUIRE(again.vertex_count() == cls.vertex_count());
        CHECK(again.alphabet() == cls.alphabet());
        for (std::size_t i = 0; i < cls.vertex_count(); ++i)
            for (std::size_t x = 0; x < cls.alphabet().size; ++x)
                CHECK(again.vertex(i)[x] == cls.vertex(i)[x]);  // bit-exact
    }
}

TEST_CASE("shipped state files round trip exactly") {
    for (const char* path : kShippedStates) {
        INFO(path);
        const auto rho = load_state(path);
        std::istringstream round(serialize_state(rho));
        const auto again = parse_state(path, round);
        REQUIRE(again.dim() == rho.dim());
        CHECK((again.entries() - rho.entries()).linf_norm() == 0.0);
    }
}

TEST_CASE("shipped povm and menu files parse") {
    const auto basis = load_povm("instances/quantum/basis.povm");
    CHECK(basis.outcomes() == 2);
    std::istringstream round(serialize_povm(basis));
    const auto again = parse_povm("basis", round);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK((again.effects()[i] - basis.effects()[i]).linf_norm() == 0.0);
    const auto menu = load_menu("instances/quantum/two_bases.menu");
    CHECK(menu.povms.size() == 2);
    CHECK(menu.dim == 2);
}

TEST_CASE("class parser rejects malformed input") {
    auto expect_fail = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(parse_class("test", in), parse_error);
    };
    expect_fail("");
    expect_fail("alphabet 0\nvertex\n");
    expect_fail("banana 2\nvertex 0.5 0.5\n");
    expect_fail("alphabet 2\nvertex 0.5\n");             // wrong arity
    expect_fail("alphabet 2\nvertex 0.5 plums\n");       // bad number
    expect_fail("alphabet 2\nvertex 0.9 0.3\n");         // not a distribution
    expect_fail("alphabet 2\nlabels only_one\nvertex 0.5 0.5\n");
    expect_fail("alphabet 2\n");                          // no vertices
}

TEST_CASE("state and povm parsers reject malformed input") {
    std::istringstream s1("dim 2\nrow 1,0 0,0\n");  // missing second row
    CHECK_THROWS_AS(parse_state("s1", s1), parse_error);
    std::istringstream s2("dim 2\nrow 0.6,0 0,0\nrow 0,0 0.6,0\n");  // trace 1.2
    CHECK_THROWS_AS(parse_state("s2", s2), parse_error);
    std::istringstream s3("dim 17\n");
    CHECK_THROWS_AS(parse_state("s3", s3), parse_error);
    std::istringstream s4("dim 2\nrow 1 0\nrow 0 0\n");  // not re,im pairs
    CHECK_THROWS_AS(parse_state("s4", s4), parse_error);
    std::istringstream p1("dim 2\neffect\nrow 0.5,0 0,0\nrow 0,0 0.5,0\n");
    CHECK_THROWS_AS(parse_povm("p1", p1), parse_error);  // does not sum to I
    CHECK_THROWS_AS(load_state("no/such/file.qst"), parse_error);
}

TEST_CASE("comments and blank lines are ignored") {
    std::istringstream in(
        "# a coin class\n"
        "alphabet 2\n"
        "\n"
        "labels heads tails  # inline comment\n"
        "vertex 0.25 0.75\n");
    const auto cls = parse_class("test", in);
    CHECK(cls.vertex_count() == 1);
    CHECK(cls.alphabet().labels[0] == "heads");
    CHECK(cls.vertex(0)[0] == 0.25);
}

TEST_CASE("config parser handles key=value with overrides") {
    std::istringstream in(
        "# run manifest\n"
        "mode = stein\n"
        "  trials=100  \n"
        "path = a/b c.cls\n");
    const auto cfg = parse_config("test", in);
    CHECK(cfg.at("mode") == "stein");
    CHECK(cfg.at("trials") == "100");
    CHECK(cfg.at("path") == "a/b c.cls");
    std::istringstream bad("not a pair\n");
    CHECK_THROWS_AS(parse_config("test", bad), parse_error);
    std::istringstream empty_key("= value\n");
    CHECK_THROWS_AS(parse_config("test", empty_key), parse_error);
}

TEST_CASE("shipped config manifests parse") {
    for (const auto& entry : std::filesystem::directory_iterator("instances/configs")) {
        INFO(entry.path().string());
        const auto cfg = load_config(entry.path().string());
        CHECK(cfg.count("mode") == 1);
    }
}

TEST_CASE("menu loading resolves paths and checks dimensions") {
    CHECK_THROWS_AS(load_menu("no/such.menu"), parse_error);
    std::ofstream("/tmp/advtest_empty.menu") << "# nothing\n";
    CHECK_THROWS_AS(load_menu("/tmp/advtest_empty.menu"), parse_error);
}
