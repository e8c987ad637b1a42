#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blowuplab/scenario.hpp"

#include <cmath>
#include <string>

using namespace blowuplab;
using nlohmann::json;

namespace {

json minimal_scenario() {
    return json::parse(R"({
      "name": "t",
      "grid": {"kind": "interval", "bounds": [[0.0, 3.141592653589793]],
               "n": [51]},
      "model": {"f": "power:4", "zeta": "one", "p": 2.0},
      "regime": "exploratory",
      "initial_data": "eigen_scaled:2.0",
      "solver": {"horizon": 2.0, "ladder": [10.0, 100.0, 1000.0]}
    })");
}

}  // namespace

TEST_CASE("scenario parsing") {
    const Scenario sc = scenario_from_json(minimal_scenario());
    CHECK(sc.name == "t");
    CHECK(sc.kind == GridKind::Interval);
    CHECK(sc.n[0] == 51);
    CHECK(sc.n[1] == 1);
    CHECK(sc.f_key == "power:4");
    CHECK(sc.regime == Regime::Exploratory);
    CHECK(sc.init_key == "eigen_scaled");
    CHECK(sc.init_amplitude == doctest::Approx(2.0));
    CHECK(sc.controls.horizon == doctest::Approx(2.0));
    REQUIRE(sc.controls.ladder.size() == 3);
}

TEST_CASE("scenario parsing: object-form initial data and options") {
    json j = minimal_scenario();
    j["model"]["kappa"] = 4.0;
    j["model"]["p"] = 3.0;
    j["initial_data"] = {{"key", "proposition_cutoff"},
                         {"K", {{0.4, 0.6}}},
                         {"order", 3}};
    j["solver"]["eps_reg"] = 1e-6;
    j["check"] = {{"horizon", 3.0}};
    j["output"] = {{"dir", "/tmp/x"}};
    const Scenario sc = scenario_from_json(j);
    CHECK(sc.init_key == "proposition_cutoff");
    CHECK(sc.cutoff_K[0][0] == doctest::Approx(0.4));
    CHECK(sc.cutoff_order == 3);
    CHECK(sc.kappa.has_value());
    CHECK(sc.controls.eps_reg == doctest::Approx(1e-6));
    CHECK(sc.check_range.horizon == doctest::Approx(3.0));
    CHECK(sc.out_dir == "/tmp/x");
}

TEST_CASE("scenario errors name the offending location") {
    auto error_mentions = [](const json& j, const std::string& needle) {
        try {
            scenario_from_json(j);
        } catch (const ScenarioError& e) {
            return std::string(e.what()).find(needle) != std::string::npos;
        }
        return false;
    };

    json j = minimal_scenario();
    j.erase("grid");
    CHECK(error_mentions(j, "'grid'"));

    j = minimal_scenario();
    j["grid"]["kind"] = "triangle";
    CHECK(error_mentions(j, "/grid/kind"));

    j = minimal_scenario();
    j["grid"]["bounds"] = {{0.0, 1.0}, {0.0, 1.0}};
    CHECK(error_mentions(j, "/grid/bounds"));

    j = minimal_scenario();
    j["initial_data"] = "mystery:1";
    CHECK_THROWS_AS(scenario_from_json(j), ScenarioError);

    j = minimal_scenario();
    j["solver"]["ladder"] = json::array();
    CHECK(error_mentions(j, "/solver/ladder"));

    CHECK_THROWS_AS(load_scenario("/nonexistent/path.json"), ScenarioError);
}

TEST_CASE("prepare_run assembles grid, eigenpair and initial data") {
    const Scenario sc = scenario_from_json(minimal_scenario());
    const RunContext ctx = prepare_run(sc);
    CHECK(ctx.grid.n[0] == 51);
    CHECK(ctx.eig.lambda1 == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(sup_norm(ctx.u0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ctx.mass0 > 0.0);
    CHECK(ctx.exploratory);  // regime is exploratory
}

TEST_CASE("prepare_run enforces regime hypotheses unless exploratory") {
    json j = minimal_scenario();
    j["regime"] = "Th1";
    j["model"]["zeta"] = "linear:0.5,0";  // (z1) fails
    const Scenario sc = scenario_from_json(j);
    CHECK_THROWS_AS(prepare_run(sc), std::runtime_error);
    const RunContext ctx = prepare_run(sc, /*exploratory=*/true);
    CHECK(ctx.exploratory);
    REQUIRE(ctx.assumptions.find("z1") != nullptr);
    CHECK(ctx.assumptions.find("z1")->status == CheckStatus::Fails);
}

TEST_CASE("bundled scenarios load and their hypotheses hold") {
    for (const char* name :
         {"th1_exp", "th2_cubic", "th2_cubic_positive_energy", "th3_cutoff",
          "exploratory_2d"}) {
        CAPTURE(name);
        const Scenario sc =
            load_scenario(std::string(SCENARIO_DIR) + "/" + name + ".json");
        const RunContext ctx = prepare_run(sc);
        for (const auto& c : ctx.assumptions.checks) {
            CAPTURE(c.name);
            CHECK(c.status != CheckStatus::Fails);
        }
    }
}

TEST_CASE("verification pipeline on a small supercritical scenario") {
    json j = minimal_scenario();
    j["regime"] = "Th2";
    j["model"]["alpha"] = 4.0;
    j["model"]["epsilon"] = 2.0;
    j["model"]["C0"] = 0.25;
    const Scenario sc = scenario_from_json(j);
    const RunContext ctx = prepare_run(sc);

    const auto bounds = evaluate_bounds(ctx);
    REQUIRE(bounds.size() == 1);
    CHECK(bounds[0].regime == "Th2");
    CHECK(bounds[0].applicable);

    const VerifyOutcome out = run_verify(ctx);
    CHECK(out.verdict.status == BlowupStatus::BlewUp);
    CHECK(out.consistent);
    CHECK(out.monitors_passed);
    CHECK(out.verdict.T_obs <=
          bounds[0].T_star + out.verdict.uncertainty);
    CHECK(out.verdict.consistency.at("Th2"));
    CHECK(out.verdict.monitors.count("DI3") == 1);
    CHECK(out.verdict.monitors.count("EnergyDecay") == 1);
}

TEST_CASE("refinement doubles the resolution") {
    const Scenario sc = scenario_from_json(minimal_scenario());
    const Scenario r = refine_scenario(sc);
    CHECK(r.n[0] == 101);
    CHECK(refine_scenario(r).n[0] == 201);
}
