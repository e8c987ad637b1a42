#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blowuplab/initial_data.hpp"
#include "blowuplab/operators.hpp"

#include <cmath>

using namespace blowuplab;

TEST_CASE("cutoff profiles: plateau, support, and monotone transitions") {
    const Grid g = build_interval(0.0, 1.0, 201);
    for (int order : {1, 3, 5}) {
        const CutoffProfile c = build_cutoff(g, {{{0.4, 0.6}, {}}}, order);
        CHECK(c.order == order);
        CHECK(c.phi[0] == 0.0);
        CHECK(c.phi[200] == 0.0);
        double prev = -1.0;
        for (int ix = 0; ix < g.n[0]; ++ix) {
            const double x = g.x(ix), v = c.phi[ix];
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (x >= 0.4 - 1e-12 && x <= 0.6 + 1e-12)
                CHECK(v == doctest::Approx(1.0));
            if (x <= 0.4 + 1e-12) {  // rising half
                CHECK(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
    CHECK_THROWS_AS(build_cutoff(g, {{{0.6, 0.4}, {}}}, 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_cutoff(g, {{{0.0, 0.6}, {}}}, 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_cutoff(g, {{{0.4, 0.6}, {}}}, 2),
                    std::invalid_argument);
}

TEST_CASE("2D cutoff is the tensor product of axis profiles") {
    const Grid g = build_rectangle(0.0, 1.0, 0.0, 1.0, 81, 81);
    const CutoffProfile c =
        build_cutoff(g, {{{0.3, 0.7}, {0.4, 0.6}}}, 3);
    CHECK(c.phi[g.index(40, 40)] == doctest::Approx(1.0));  // center
    for (int i = 0; i < g.n[0]; ++i) {
        CHECK(c.phi[g.index(i, 0)] == 0.0);
        CHECK(c.phi[g.index(0, i)] == 0.0);
    }
    // separability: phi(x,y) phi(xc,yc) = phi(x,yc) phi(xc,y)
    const int xc = 40, yc = 40;
    for (int i = 5; i < 75; i += 7)
        for (int j = 5; j < 75; j += 7)
            CHECK(c.phi[g.index(i, j)] * c.phi[g.index(xc, yc)] ==
                  doctest::Approx(c.phi[g.index(i, yc)] *
                                  c.phi[g.index(xc, j)])
                      .epsilon(1e-12));
}

TEST_CASE("tent profile gradient energy is exact") {
    // |phi'| = 2.5 on both ramps of total length 0.8:
    // \int |phi'|^3 = 0.8 * 2.5^3 = 12.5
    const Grid g = build_interval(0.0, 1.0, 201);
    const CutoffProfile c = build_cutoff(g, {{{0.4, 0.6}, {}}}, 1);
    CHECK(grad_p_energy(c.phi, 3.0, 0.0, g) ==
          doctest::Approx(12.5).epsilon(1e-10));
}

TEST_CASE("energy_p matches the snapshot energy") {
    const Grid g = build_interval(0.0, M_PI, 1501);
    Field u = sample_field(g, [](double x) { return std::sin(x); });
    apply_dirichlet(u, g);
    const Nonlinearity f = make_nonlinearity("power:4");
    CHECK(energy_p(u, f, 1.0, 2.0, g) ==
          doctest::Approx(5.0 * M_PI / 32.0).epsilon(1e-5));
}

TEST_CASE("scaling threshold lambda*") {
    const Grid g = build_interval(0.0, 1.0, 201);
    const CutoffProfile c = build_cutoff(g, {{{0.4, 0.6}, {}}}, 1);
    const Nonlinearity f = make_nonlinearity("power:4");
    const double p = 3.0, kappa = 4.0;
    const PropositionLambda pl = proposition_lambda(c, f, 1.0, p, kappa, g);

    // E_p(lambda phi) = lambda^3 G/3 - lambda^4 \int phi^4 / 4 crosses zero at
    // lambda = 4 G / (3 \int phi^4); reproduce with the library's quadrature
    Field phi4(c.phi.size());
    for (size_t k = 0; k < phi4.size(); ++k)
        phi4[k] = std::pow(c.phi[k], 4.0);
    const double expected =
        4.0 * pl.grad_p_phi / (3.0 * integrate(phi4, g));
    CHECK(pl.lambda_star == doctest::Approx(expected).epsilon(1e-6));

    // minimality: E_p <= 0 at lambda*, > 0 just below
    auto scaled = [&](double lam) {
        Field u(c.phi.size());
        for (size_t k = 0; k < u.size(); ++k) u[k] = lam * c.phi[k];
        return u;
    };
    CHECK(energy_p(scaled(pl.lambda_star), f, 1.0, p, g) <= 0.0);
    CHECK(energy_p(scaled(0.999 * pl.lambda_star), f, 1.0, p, g) > 0.0);

    // the sufficient closed-form threshold dominates lambda*
    CHECK(pl.sufficient_threshold >= pl.lambda_star);
    CHECK(energy_p(scaled(pl.sufficient_threshold), f, 1.0, p, g) <= 0.0);

    CHECK_THROWS_AS(proposition_lambda(c, f, 1.0, 2.0, 4.0, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(proposition_lambda(c, f, 0.0, p, kappa, g),
                    std::invalid_argument);
}

TEST_CASE("blow-up set membership") {
    const Grid g = build_interval(0.0, 1.0, 201);
    const CutoffProfile c = build_cutoff(g, {{{0.4, 0.6}, {}}}, 1);
    const Nonlinearity f = make_nonlinearity("power:4");
    const PropositionLambda pl = proposition_lambda(c, f, 1.0, 3.0, 4.0, g);

    CHECK_FALSE(in_blowup_set(zero_field(g), f, 1.0, 3.0, g));

    Field small(c.phi.size()), big(c.phi.size());
    for (size_t k = 0; k < c.phi.size(); ++k) {
        small[k] = 0.5 * c.phi[k];
        big[k] = pl.lambda_star * c.phi[k];
    }
    CHECK_FALSE(in_blowup_set(small, f, 1.0, 3.0, g));
    CHECK(in_blowup_set(big, f, 1.0, 3.0, g));
}
