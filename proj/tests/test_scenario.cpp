#include <doctest.h>

#include <cmath>
#include <string>

#include "oracles.hpp"
#include "vgrl/expr.hpp"
#include "vgrl/scenario.hpp"

using namespace vgrl;

namespace {

const char* kInline = R"(name = inline-tracking

[system]
n = 2
m = 1
f1 = -x1 + x2
f2 = -(x1 + 1)*x2 - 49*x1 + 0.5*cos(x1)^3*sin(x2)
g1_1 = 0
g2_1 = 1
h1 = xd2
h2 = -49*xd1

[law]
type = constant
alpha = 35.9
u_m = 9
gamma = 0.1
Q = 10 10

[critic]
basis = quadratic

[sim]
t_end = 20
x0 = 1.5 1.5
convergence_window = 5
steady_window = 5
)";

double eval(const std::string& text, std::vector<double> vars = {},
            std::vector<std::string> names = {}) {
    return Expression::parse(text, names)(vars.data());
}

std::string config_error(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("expression precedence") {
    CHECK(eval("1 + 2 * 3") == 7.0);
    CHECK(eval("(1 + 2) * 3") == 9.0);
    CHECK(eval("2 ^ 3 ^ 2") == 512.0);
    CHECK(eval("-2 ^ 2") == -4.0);
    CHECK(eval("8 / 2 / 2") == 2.0);
    CHECK(eval("10 - 4 - 3") == 3.0);
    CHECK(eval("--3") == 3.0);
    CHECK(eval("2.5e-1 * 4") == 1.0);
    CHECK(eval("x * y - y", {3.0, 2.0}, {"x", "y"}) == 4.0);
    CHECK(eval("sin(0.3)^2 + cos(0.3)^2") == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval("tanh(0.5)") == std::tanh(0.5));
    CHECK(Expression::parse("x2", {"x1", "x2"}).arity() == 2);
}

TEST_CASE("expression errors") {
    for (const char* bad : {"", "1 +", "sin(1", "foo(1)", "y", "1 2", "(", "2 * * 3", "x1x"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(Expression::parse(bad, {"x1"}), ConfigError);
    }
    try {
        Expression::parse("1 + $", {});
        FAIL("accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("column 5") != std::string::npos);
    }
}

TEST_CASE("presets carry the quoted parameters") {
    const Scenario a = preset_scenario("um9-variable");
    CHECK(a.law == UpdateLaw::variable);
    CHECK(a.law_cfg.alpha == 35.9);
    CHECK(a.law_cfg.k2 == 1.4);
    CHECK(a.law_cfg.cost.gamma == 0.1);
    CHECK(a.law_cfg.constraint.u_m == 9.0);
    CHECK(same_values(a.sim_cfg.x0, Vector::Constant(2, 1.5)));
    CHECK(a.sim_cfg.W0.norm() == 0.0);
    CHECK(a.sim_cfg.dither_on);

    const Scenario b = preset_scenario("um18-variable");
    CHECK(b.law_cfg.alpha == 92.9);
    CHECK(b.law_cfg.k2 == 0.7);
    CHECK(b.law_cfg.cost.gamma == 0.1);
    CHECK(b.law_cfg.constraint.u_m == 1.8);

    CHECK(preset_scenario("um9-constant").law == UpdateLaw::constant);
    CHECK(preset_scenario_names().size() == 4);
    CHECK_THROWS_AS(preset_scenario("um7-variable"), ConfigError);
}

TEST_CASE("serialization round-trips") {
    for (const auto& name : preset_scenario_names()) {
        const Scenario sc = preset_scenario(name);
        CHECK(parse_scenario(serialize_scenario(sc)) == sc);
    }
    Scenario sc = parse_scenario(kInline);
    sc.law_cfg.K1(3) = 0.125;
    sc.law_cfg.K2(1, 2) = sc.law_cfg.K2(2, 1) = 0.01;
    sc.sim_cfg.W0(0) = 1.0 / 3.0;
    sc.sim_cfg.record_stride = 4;
    sc.bounds.gamma1 = 0.05;
    const Scenario back = parse_scenario(serialize_scenario(sc));
    CHECK(back == sc);
    CHECK(serialize_scenario(back) == serialize_scenario(sc));
}

TEST_CASE("comments") {
    std::string text = std::string("# leading comment\n; also a comment\n") + kInline;
    text.replace(text.find("type = constant"), 15, "type = constant   # trailing");
    text.replace(text.find("name = inline-tracking"), 22, "name = run#1");
    const Scenario sc = parse_scenario(text);
    CHECK(sc.law == UpdateLaw::constant);
    CHECK(sc.name == "run#1");
}

TEST_CASE("inline system reproduces the preset numerically") {
    const Scenario sc = parse_scenario(kInline);
    const AugmentedModel inline_model = build_model(sc.system);
    const AugmentedModel preset = oracle::tracking_model();
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        const Vector z = oracle::uniform(rng, 4, -3, 3);
        CHECK(oracle::rel_err(inline_model.F(z), preset.F(z)) <= 1e-14);
        CHECK(same_values(inline_model.G(z), preset.G(z)));
    }

    Scenario p = preset_scenario("um9-constant");
    p.sim_cfg.t_end = 20.0;
    p.sim_cfg.convergence_window = 5.0;
    p.sim_cfg.steady_window = 5.0;
    const ExperimentResult a = run_scenario(sc);
    const ExperimentResult b = run_scenario(p);
    CHECK(oracle::rel_err(a.final_weights, b.final_weights) <= 1e-9);
}

TEST_CASE("scenario validation messages") {
    const std::string base(kInline);

    // non-symmetric K2 names the M matrix
    std::string k2 = "K2 =";
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) k2 += i == j ? " 0.5" : (i == 0 && j == 1 ? " 0.1" : " 0");
    }
    std::string text = base;
    text.replace(text.find("Q = 10 10"), 9, "Q = 10 10\n" + k2);
    const std::string msg = config_error(text);
    CHECK(msg.find("K2") != std::string::npos);
    CHECK(msg.find("M =") != std::string::npos);

    text = base;
    text.replace(text.find("alpha = 35.9"), 12, "alpha = -1");
    CHECK(config_error(text).find("alpha") != std::string::npos);

    text = base + "\n[sim]\nfoo = 1\n";
    CHECK_FALSE(config_error(text).empty());

    text = base;
    text.replace(text.find("t_end = 20"), 10, "t_end = 20\nwobble = 3");
    CHECK(config_error(text).find("wobble") != std::string::npos);

    text = base;
    text.replace(text.find("t_end = 20"), 10, "t_end = 20\nt_end = 30");
    CHECK_FALSE(config_error(text).empty());

    text = base;
    text.replace(text.find("x0 = 1.5 1.5"), 12, "x0 = 1.5 1.5 1.5");
    CHECK(config_error(text).find("x0") != std::string::npos);

    text = base;
    text.replace(text.find("f2 = "), 5, "f2 = 1 + * ");
    CHECK(config_error(text).find("column") != std::string::npos);

    text = base;
    text.replace(text.find("x0 = 1.5 1.5"), 12, "");
    CHECK(config_error(text).find("x0") != std::string::npos);

    CHECK_FALSE(config_error("[system]\npreset = nope\n[sim]\nx0 = 0 0\n").empty());
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.ini"), ConfigError);
}
