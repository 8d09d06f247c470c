#include <doctest.h>

#include <string>

#include "rtz/config.hpp"
#include "rtz/errors.hpp"

using namespace rtz;

namespace {

ConfigError parse_error(const std::string& text) {
    try {
        parse_config(text, "test.conf");
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected ConfigError");
    return ConfigError("", "");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parses every key") {
    const auto c = parse_config(
        "# comment\n"
        "gamma = 2.5\n"
        "slow = logpower:0.5   # trailing\n"
        "law = uniform\n"
        "\n"
        "q = 0.25\n"
        "n_min = 2\n"
        "n_max = 5\n"
        "trials = 17\n"
        "delta = 1e-7\n"
        "eta = 0.05\n"
        "master_seed = 18446744073709551615\n"
        "cumulative_n_min = 0\n"
        "cumulative_n_max = 0\n");
    CHECK(c.gamma == 2.5);
    CHECK(c.slow == SlowVariation::log_power(0.5));
    CHECK(c.law == CoefficientLaw::UniformCentered);
    CHECK(c.q == 0.25);
    CHECK(c.n_min == 2);
    CHECK(c.n_max == 5);
    CHECK(c.trials == 17);
    CHECK(c.delta == 1e-7);
    CHECK(c.eta == 0.05);
    CHECK(c.master_seed == 18446744073709551615ULL);
    CHECK(c.cumulative_radii().empty());
    CHECK(parse_config(format_config(c)) == c);
}

TEST_CASE("defaults survive an empty file") {
    CHECK(parse_config("") == ExperimentConfig{});
    CHECK(parse_config(format_config(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("errors carry field and line") {
    auto e = parse_error("gamma = 1\nq = 1.5\n");
    CHECK(e.field() == "q");
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("test.conf:2") != std::string::npos);

    e = parse_error("gamma = 1\nbogus = 3\n");
    CHECK(e.field() == "bogus");
    CHECK(e.line() == 2);

    e = parse_error("gamma = 1\ngamma = 2\n");
    CHECK(e.line() == 2);

    e = parse_error("trials = ten\n");
    CHECK(e.field() == "trials");

    e = parse_error("law =\n");
    CHECK(e.field() == "law");

    e = parse_error("law = cauchy\n");
    CHECK(e.field() == "law");

    e = parse_error("just some words\n");
    CHECK(e.line() == 1);

    e = parse_error("n_min = 8\nn_max = 4\n");
    CHECK(e.line() >= 1);

    CHECK_THROWS_AS(load_config("/nonexistent/file.conf"), ConfigError);
}

}
