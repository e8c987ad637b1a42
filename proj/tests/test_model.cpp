#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blowuplab/model.hpp"

#include <cmath>

using namespace blowuplab;

TEST_CASE("nonlinearity registry") {
    const Nonlinearity cub = make_nonlinearity("power:4");
    CHECK(cub.f(2.0) == doctest::Approx(8.0));
    CHECK(cub.f(-2.0) == doctest::Approx(-8.0));
    CHECK(cub.f(0.0) == 0.0);
    CHECK(cub.F(2.0) == doctest::Approx(4.0));
    CHECK(cub.alpha == doctest::Approx(4.0));
    CHECK(cub.kappa == doctest::Approx(4.0));

    const Nonlinearity ex = make_nonlinearity("exp_minus_one");
    CHECK(ex.f(1.0) == doctest::Approx(std::expm1(1.0)));
    CHECK(ex.F(1.0) == doctest::Approx(std::exp(1.0) - 2.0));
    CHECK(ex.F(0.0) == doctest::Approx(0.0));

    CHECK_THROWS_AS(make_nonlinearity("nope"), std::invalid_argument);
    CHECK_THROWS_AS(make_nonlinearity("power:1"), std::invalid_argument);
}

TEST_CASE("table nonlinearity interpolates and validates") {
    const Nonlinearity t = make_nonlinearity_table({0.0, 1.0, 2.0},
                                                   {0.0, 1.0, 4.0});
    CHECK(t.f(0.5) == doctest::Approx(0.5));
    CHECK(t.f(1.5) == doctest::Approx(2.5));
    CHECK(t.f(5.0) == doctest::Approx(4.0));   // clamped
    CHECK(t.f(-1.0) == doctest::Approx(0.0));  // clamped
    CHECK_THROWS_AS(make_nonlinearity_table({1.0, 0.0}, {0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_nonlinearity_table({1.0}, {0.0}),
                    std::invalid_argument);
}

TEST_CASE("cached antiderivative for custom f") {
    Nonlinearity n;
    n.f = [](double s) { return std::cos(s); };
    init_antiderivative(n);
    CHECK(n.F(1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-10));
    CHECK(n.F(-2.0) == doctest::Approx(std::sin(-2.0)).epsilon(1e-10));

    Nonlinearity bare;
    bare.f = [](double s) { return s; };
    CHECK_THROWS_AS(bare.F(1.0), std::runtime_error);
}

TEST_CASE("coefficient registry and Theta") {
    const Coefficient one = make_coefficient("one");
    CHECK(one.zeta(3.0) == 1.0);
    CHECK(one.Theta(5.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(one.tail == TailFlag::GeOneEventually);

    const Coefficient e = make_coefficient("exp_t2");
    CHECK(e.zeta(0.0) == doctest::Approx(1.0));
    CHECK(e.Theta(0.0) == doctest::Approx(0.0));
    // \int_0^1 (e^{s^2} - 1) ds
    CHECK(e.Theta(1.0) == doctest::Approx(0.4626517459071816).epsilon(1e-10));
    CHECK(e.zeta_deriv(0.5) ==
          doctest::Approx(std::exp(0.25)).epsilon(1e-10));

    const Coefficient lin = make_coefficient("linear:0.5,1");
    CHECK(lin.zeta(2.0) == doctest::Approx(2.5));
    CHECK(lin.tail == TailFlag::GeOneEventually);
    const Coefficient dec = make_coefficient("linear:0.5,0");
    CHECK(dec.tail == TailFlag::BelowOneForever);

    CHECK_THROWS_AS(make_coefficient("nope"), std::invalid_argument);
    CHECK_THROWS_AS(make_coefficient("linear:1"), std::invalid_argument);
}

TEST_CASE("finite-difference zeta derivative fallback") {
    Coefficient c;
    c.zeta = [](double t) { return std::exp(0.3 * t); };
    CHECK(c.zeta_deriv(2.0) ==
          doctest::Approx(0.3 * std::exp(0.6)).epsilon(1e-8));
    CHECK(c.zeta_deriv(0.0) == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("compute_m") {
    CHECK(compute_m(make_coefficient("one"), 10.0, TailFlag::GeOneEventually) ==
          doctest::Approx(0.0));
    CHECK(compute_m(make_coefficient("exp_t2"), 10.0,
                    TailFlag::GeOneEventually) == doctest::Approx(0.0));
    // zeta = 0.5 + t: Theta(t) = -t/2 + t^2/2, min at t = 1/2
    CHECK(compute_m(make_coefficient("linear:0.5,1"), 10.0,
                    TailFlag::GeOneEventually) ==
          doctest::Approx(-0.125).epsilon(1e-6));
    CHECK_THROWS_AS(compute_m(make_coefficient("linear:0.5,0"), 10.0,
                              TailFlag::BelowOneForever),
                    std::runtime_error);
    CHECK_THROWS_AS(compute_m(make_coefficient("one"), -1.0,
                              TailFlag::GeOneEventually),
                    std::invalid_argument);
}

TEST_CASE("threshold_C") {
    // e^C - 1 = 2C at C ~= 1.25643
    CHECK(threshold_C(make_nonlinearity("exp_minus_one"), 1.0) ==
          doctest::Approx(1.2564312086261695).epsilon(1e-8));
    // u^2 = 2u at C = 2
    CHECK(threshold_C(make_nonlinearity("power:3"), 1.0) ==
          doctest::Approx(2.0).epsilon(1e-8));
    // never catches up with 2 lambda1 s
    Nonlinearity linear_f;
    linear_f.f = [](double s) { return s; };
    linear_f.lambda_pos = 1e-6;
    CHECK_THROWS_AS(threshold_C(linear_f, 1.0), std::runtime_error);
    // lambda_pos is a floor
    Nonlinearity strong;
    strong.f = [](double s) { return 100.0 * s; };
    strong.lambda_pos = 0.25;
    CHECK(threshold_C(strong, 1.0) >= 0.25);
}

TEST_CASE("Th1 hypotheses on the exponential model") {
    const AssumptionReport rep =
        check_assumptions(make_nonlinearity("exp_minus_one"),
                          make_coefficient("exp_t2"), Regime::Th1);
    CHECK(rep.all_hold());
    for (const char* name : {"f1", "f2", "f3", "z1"}) {
        const AssumptionCheck* c = rep.find(name);
        REQUIRE(c != nullptr);
        CHECK(c->status == CheckStatus::Holds);
    }
}

TEST_CASE("hypothesis failures carry witnesses") {
    // (f1): f(0) != 0
    Nonlinearity shifted = make_nonlinearity("exp_minus_one");
    shifted.f = [](double s) { return std::expm1(s) + 1.0; };
    AssumptionReport rep = check_assumptions(shifted, make_coefficient("one"),
                                             Regime::Th1);
    CHECK(rep.find("f1")->status == CheckStatus::Fails);

    // (f1): concave beyond a point
    Nonlinearity concave;
    concave.f = [](double s) { return s >= 0.0 ? std::sqrt(s) : -std::sqrt(-s); };
    concave.F_closed = [](double s) {
        return 2.0 / 3.0 * std::pow(std::abs(s), 1.5);
    };
    concave.lambda_pos = 1e-6;
    rep = check_assumptions(concave, make_coefficient("one"), Regime::Th1);
    CHECK(rep.find("f1")->status == CheckStatus::Fails);
    CHECK(rep.find("f1")->witness.has_value());

    // (f2): f negative beyond lambda_pos
    Nonlinearity neg;
    neg.f = [](double s) { return -s; };
    neg.F_closed = [](double s) { return -0.5 * s * s; };
    neg.lambda_pos = 1e-6;
    rep = check_assumptions(neg, make_coefficient("one"), Regime::Th1);
    CHECK(rep.find("f2")->status == CheckStatus::Fails);

    // (f3): 1/f not integrable for linear f
    Nonlinearity lin;
    lin.f = [](double s) { return s; };
    lin.F_closed = [](double s) { return 0.5 * s * s; };
    lin.lambda_pos = 1e-6;
    rep = check_assumptions(lin, make_coefficient("one"), Regime::Th1);
    CHECK(rep.find("f3")->status == CheckStatus::Fails);

    // (z1): zeta < 1 forever
    rep = check_assumptions(make_nonlinearity("exp_minus_one"),
                            make_coefficient("linear:0.5,0"), Regime::Th1);
    CHECK(rep.find("z1")->status == CheckStatus::Fails);
}

TEST_CASE("Th2 hypotheses") {
    AssumptionReport rep = check_assumptions(
        make_nonlinearity("power:4"), make_coefficient("one"), Regime::Th2);
    CHECK(rep.find("ff1")->status == CheckStatus::Holds);
    CHECK(rep.find("z2")->status == CheckStatus::Holds);

    // C0 too large: (2+eps) F < C0 |s|^alpha for large s
    Nonlinearity greedy = make_nonlinearity("power:4");
    greedy.C0 = 2.0;
    rep = check_assumptions(greedy, make_coefficient("one"), Regime::Th2);
    CHECK(rep.find("ff1")->status == CheckStatus::Fails);

    // decreasing zeta violates (z2)
    rep = check_assumptions(make_nonlinearity("power:4"),
                            make_coefficient("linear:2,-0.1"), Regime::Th2);
    CHECK(rep.find("z2")->status == CheckStatus::Fails);

    // missing structural parameters throw
    Nonlinearity bare;
    bare.f = [](double s) { return s * s * s; };
    bare.F_closed = [](double s) { return 0.25 * s * s * s * s; };
    CHECK_THROWS_AS(
        check_assumptions(bare, make_coefficient("one"), Regime::Th2),
        std::invalid_argument);
}

TEST_CASE("Th3 hypotheses") {
    AssumptionReport rep =
        check_assumptions(make_nonlinearity("power:4"), make_coefficient("one"),
                          Regime::Th3, 3.0);
    CHECK(rep.find("fF")->status == CheckStatus::Holds);

    // kappa F > u f(u) when kappa overstates the growth
    Nonlinearity over = make_nonlinearity("power:4");
    over.kappa = 5.0;
    rep = check_assumptions(over, make_coefficient("one"), Regime::Th3, 3.0);
    CHECK(rep.find("fF")->status == CheckStatus::Fails);

    CHECK_THROWS_AS(check_assumptions(make_nonlinearity("power:4"),
                                      make_coefficient("one"), Regime::Th3,
                                      2.0),
                    std::invalid_argument);
}

TEST_CASE("regime names") {
    CHECK(parse_regime("Th1") == Regime::Th1);
    CHECK(parse_regime("exploratory") == Regime::Exploratory);
    CHECK(regime_name(Regime::Th3) == "Th3");
    CHECK_THROWS_AS(parse_regime("Th9"), std::invalid_argument);
}
