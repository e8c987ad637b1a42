#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blowuplab/operators.hpp"

#include <cmath>
#include <random>

using namespace blowuplab;

namespace {

Field random_dirichlet_field(const Grid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    Field f = zero_field(g);
    for (double& v : f) v = val(rng);
    apply_dirichlet(f, g);
    return f;
}

}  // namespace

TEST_CASE("p = 2 reduces to the classical laplacian") {
    const Grid g = build_interval(0.0, M_PI, 401);
    Field u = sample_field(g, [](double x) { return std::sin(x); });
    apply_dirichlet(u, g);
    const Field lap = p_laplacian_apply(u, 2.0, 0.0, g);
    double err = 0.0;
    for (int ix = 1; ix < g.n[0] - 1; ++ix)
        err = std::max(err, std::abs(lap[ix] + u[ix]));  // -sin'' = sin
    CHECK(err < 1e-4);
    CHECK(lap[0] == 0.0);
    CHECK(lap[g.n[0] - 1] == 0.0);
}

TEST_CASE("p-laplacian is (p-1)-homogeneous at eps = 0") {
    const Grid g = build_interval(0.0, 1.0, 101);
    Field u = sample_field(g, [](double x) { return x * (1 - x) * (2 + x); });
    apply_dirichlet(u, g);
    const double p = 3.4, c = 2.5;
    const Field l1 = p_laplacian_apply(u, p, 0.0, g);
    Field cu(u.size());
    for (size_t k = 0; k < u.size(); ++k) cu[k] = c * u[k];
    const Field l2 = p_laplacian_apply(cu, p, 0.0, g);
    const double scale = std::pow(c, p - 1.0);
    for (size_t k = 0; k < u.size(); ++k)
        CHECK(l2[k] == doctest::Approx(scale * l1[k]).epsilon(1e-10));

    CHECK_THROWS_AS(p_laplacian_apply(u, 1.5, 0.0, g), std::invalid_argument);
}

TEST_CASE("summation by parts is exact for the face-quadrature energy") {
    for (const Grid& g :
         {build_interval(0.0, M_PI, 57), build_rectangle(0.0, 1.0, 0.0, 2.0, 17, 23)}) {
        for (double p : {2.0, 3.0, 4.5}) {
            for (double eps : {0.0, 1e-3, 0.3}) {
                const Field u = random_dirichlet_field(g, 42);
                const Field lap = p_laplacian_apply(u, p, eps, g);
                Field ulap(u.size());
                for (size_t k = 0; k < u.size(); ++k) ulap[k] = u[k] * lap[k];
                const double lhs = -integrate(ulap, g);
                const double rhs = grad_p_energy(u, p, eps, g);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("grad_p_energy matches closed forms") {
    const Grid g = build_interval(0.0, M_PI, 4001);
    Field u = sample_field(g, [](double x) { return std::sin(x); });
    apply_dirichlet(u, g);
    // \int_0^pi cos^2 = pi/2
    CHECK(grad_p_energy(u, 2.0, 0.0, g) ==
          doctest::Approx(M_PI / 2).epsilon(1e-5));
    // \int_0^pi |cos|^3 = 4/3
    CHECK(grad_p_energy(u, 3.0, 0.0, g) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("principal eigenpair in 1D") {
    const Grid g = build_interval(0.0, M_PI, 401);
    const EigenPair ep = principal_eigenpair(g, 1e-12);
    CHECK(ep.lambda1 == doctest::Approx(1.0).epsilon(2e-5));
    CHECK(ep.residual < 1e-6);
    CHECK(integrate(ep.phi1, g) == doctest::Approx(1.0).epsilon(1e-12));
    // phi1 = sin(x) / 2 after mass normalization
    for (int ix = 0; ix < g.n[0]; ++ix) {
        CHECK(ep.phi1[ix] >= 0.0);
        CHECK(ep.phi1[ix] ==
              doctest::Approx(0.5 * std::sin(g.x(ix))).epsilon(5e-4));
    }
}

TEST_CASE("eigenvalue converges at second order") {
    auto lam_err = [](int n) {
        const Grid g = build_interval(0.0, M_PI, n);
        return std::abs(principal_eigenpair(g, 1e-12).lambda1 - 1.0);
    };
    const double e1 = lam_err(101), e2 = lam_err(201);
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("principal eigenpair in 2D") {
    const Grid g = build_rectangle(0.0, 1.0, 0.0, 1.0, 81, 81);
    const EigenPair ep = principal_eigenpair(g, 1e-11);
    CHECK(ep.lambda1 ==
          doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-3));
    CHECK(integrate(ep.phi1, g) == doctest::Approx(1.0).epsilon(1e-11));
    for (double v : ep.phi1) CHECK(v >= 0.0);
}

TEST_CASE("poincare constant reproduces lambda1 at p = 2") {
    const Grid g = build_interval(0.0, M_PI, 201);
    const EigenPair ep = principal_eigenpair(g, 1e-12);
    const PoincareConstant pc = poincare_constant(g, 2.0, 1e-11);
    CHECK(pc.mu1 == doctest::Approx(ep.lambda1).epsilon(1e-7));
    // C = |Omega|^{1-2/p} mu1^{-2/p} = mu1^{-1} * |Omega|^0 at p = 2
    CHECK(pc.C == doctest::Approx(1.0 / ep.lambda1).epsilon(1e-7));
}

TEST_CASE("poincare chain inequality holds for p > 2") {
    const Grid g = build_interval(0.0, 1.0, 151);
    const double p = 3.0;
    const PoincareConstant pc = poincare_constant(g, p, 1e-10);
    CHECK(pc.mu1 > 0.0);
    CHECK(pc.C > 0.0);
    // ||u||_2^2 <= C (\int |grad u|^p)^{2/p} for assorted Dirichlet fields
    const Field tests[] = {
        sample_field(g, [](double x) { return std::sin(M_PI * x); }),
        sample_field(g, [](double x) { return x * (1 - x); }),
        random_dirichlet_field(g, 11)};
    for (Field u : tests) {
        apply_dirichlet(u, g);
        const double n2 = lp_norm(u, g, 2.0);
        const double gp = grad_p_energy(u, p, 0.0, g);
        CHECK(n2 * n2 <= pc.C * std::pow(gp, 2.0 / p) * (1.0 + 1e-8));
    }
}
