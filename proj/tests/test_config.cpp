#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "otto/config.hpp"

using namespace otto;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

int config_error_line(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    FAIL("no ConfigError for: " << text);
    return -1;
}

}  // namespace

TEST_CASE("empty config gives the reference defaults") {
    const ExperimentConfig c = parse_config("");
    CHECK(c.experiment == Experiment::Single);
    CHECK(c.levels.delta_e_c == 1.0);
    CHECK(c.levels.delta_e_h == 2.0);
    CHECK(c.baths.t_c == 0.5);
    CHECK(c.baths.t_h == 5.0);
    CHECK(c.delta_theta == kPi / 8);
    CHECK_FALSE(c.output.has_value());
    CHECK(parse_config("# only a comment\n\n   \n").baths.t_h == 5.0);
}

TEST_CASE("omega-pi derives delta_theta") {
    const ExperimentConfig c = parse_config("experiment=omega-pi\nn=20");
    CHECK(c.n == 20);
    CHECK(c.omega == kPi);
    CHECK(c.delta_theta == kPi / 20);
    CHECK(parse_config("experiment=omega-pi").n == 20);
    CHECK(parse_config("experiment=omega-pi\nn=7\nomega=pi").delta_theta == kPi / 7);
}

TEST_CASE("collective takes exactly one angle") {
    ExperimentConfig c = parse_config("experiment=collective\nn=10\nomega=pi/2");
    CHECK_THAT(c.delta_theta, WithinAbs(kPi / 20, 1e-16));
    c = parse_config("experiment=collective\nn=10\ndelta_theta=pi/40");
    CHECK_THAT(c.omega, WithinAbs(kPi / 4, 1e-15));
    c = parse_config("experiment=collective\nn=4");
    CHECK(c.omega == kPi);
    CHECK(config_error_line("experiment=collective\ndelta_theta=0.1\nomega=0.5") == 3);
    CHECK(config_error_line("experiment=collective\nn=10\ndelta_theta=pi/5") == 3);
}

TEST_CASE("parameter guards carry line numbers") {
    CHECK(config_error_line("t_c=-1") == 1);
    CHECK(config_error_line("t_c=0") == 1);
    CHECK(config_error_line("\n\nt_h=abc") == 3);
    CHECK(config_error_line("t_h=1e999") == 1);
    CHECK(config_error_line("foo=1") == 1);
    CHECK(config_error_line("t_c=1\nt_c=2") == 2);
    CHECK(config_error_line("novalue") == 1);
    CHECK(config_error_line("=3") == 1);
    CHECK(config_error_line("delta_e_c=3") == 1);
    CHECK(config_error_line("experiment=warp") == 1);
    CHECK(config_error_line("n=0") == 1);
    CHECK(config_error_line("n=2.5") == 1);
    CHECK(config_error_line("experiment=ep-ratio\nn_list=5:2") == 2);
    CHECK(config_error_line("experiment=ep-ratio\nn_list=1:9") == 2);
    CHECK(config_error_line("experiment=ep-ratio\nn_list=a:b") == 2);
    CHECK(config_error_line("baseline=best") == 1);
    CHECK(config_error_line("output=") == 1);
    CHECK(config_error_line("experiment=omega-pi\ndelta_theta=0.1") == 2);
    CHECK(config_error_line("experiment=ep-scaling\nomega=pi/2") == 2);
    CHECK(config_error_line("experiment=boost-curve\nomega=pi") == 2);
    CHECK(config_error_line("experiment=single\nomega=pi") == 2);
    CHECK(config_error_line("experiment=single\ndelta_theta=4") == 2);
    CHECK(config_error_line("experiment=single\ndelta_theta=pi/0") == 2);
    CHECK(config_error_line("experiment=no-inversion\nt_c=1\nt_h=2") == 3);
}

TEST_CASE("comments, whitespace and BOM") {
    const ExperimentConfig c = parse_config("\xEF\xBB\xBF  t_c = 0.7   # cold\r\n\tt_h=3\r\n");
    CHECK(c.baths.t_c == 0.7);
    CHECK(c.baths.t_h == 3.0);
    CHECK(parse_config("output = out.csv").output == std::optional<std::string>("out.csv"));
}

TEST_CASE("angle parsing") {
    CHECK(parse_angle("0.3") == 0.3);
    CHECK(parse_angle("pi") == kPi);
    CHECK(parse_angle("PI/20") == kPi / 20);
    CHECK(parse_angle("\xCF\x80/20") == kPi / 20);
    CHECK(parse_angle("3*pi/4") == 3 * kPi / 4);
    CHECK(parse_angle("0.5pi") == 0.5 * kPi);
    CHECK(parse_angle(" pi / 8 ") == kPi / 8);
    CHECK_FALSE(parse_angle("pie"));
    CHECK_FALSE(parse_angle("x*pi"));
    CHECK_FALSE(parse_angle(""));
}

TEST_CASE("range parsing") {
    const auto r = parse_range("2:64:2");
    REQUIRE(r);
    CHECK(r->values().size() == 32);
    CHECK(r->values().back() == 64);
    CHECK(parse_range("1:3")->values() == std::vector<int>{1, 2, 3});
    CHECK(r->to_string() == "2:64:2");
    CHECK_FALSE(parse_range("5"));
    CHECK_FALSE(parse_range("1:2:3:4"));
}

TEST_CASE("per-experiment defaults") {
    const ExperimentConfig b = parse_config("experiment=boost-curve");
    CHECK(b.delta_theta == kPi / 20);
    CHECK(b.n_list.start == 1);
    CHECK(b.n_list.stop == 100);
    CHECK(parse_config("experiment=split-cycle").n == 64);
    CHECK(parse_config("experiment=no-inversion\nt_c=1\nt_h=1").delta_theta == kPi / 4);
    CHECK(parse_config("experiment=ep-ratio").baseline == Baseline::Sepo);
    CHECK(parse_config("experiment=ep-ratio\nbaseline=swo\nn_list=1:4").n_list.start == 1);
}

TEST_CASE("echo lists every resolved key once and omits output") {
    const ExperimentConfig c = parse_config("experiment=collective\nn=10\nomega=pi\noutput=x.csv");
    const auto e = c.echo();
    std::vector<std::string> keys;
    for (const auto& kv : e) keys.push_back(kv.first);
    CHECK(keys == std::vector<std::string>{"experiment", "delta_e_c", "delta_e_h", "t_c", "t_h", "n", "delta_theta",
                                           "omega"});
    CHECK(e.front().second == "collective");
    for (const auto& info : kExperiments) {
        CHECK(parse_experiment(info.name) == info.id);
        CHECK(to_string(info.id) == info.name);
    }
}
