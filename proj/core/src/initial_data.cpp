#include "blowuplab/initial_data.hpp"

#include "blowuplab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blowuplab {

namespace {

// monotone polynomial transition on [0,1]
double ramp(double s, int order) {
    s = std::clamp(s, 0.0, 1.0);
    switch (order) {
        case 1: return s;
        case 3: return s * s * (3.0 - 2.0 * s);
        case 5: return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
        default:
            throw std::invalid_argument("build_cutoff: order must be 1, 3 or 5");
    }
}

double axis_profile(double x, double lo, double hi, double klo, double khi,
                    int order) {
    if (x <= lo || x >= hi) return 0.0;
    if (x < klo) return ramp((x - lo) / (klo - lo), order);
    if (x > khi) return ramp((hi - x) / (hi - khi), order);
    return 1.0;
}

}  // namespace

CutoffProfile build_cutoff(const Grid& grid,
                           const std::array<std::array<double, 2>, 2>& K,
                           int transition_order) {
    for (int d = 0; d < grid.dim; ++d) {
        if (!(K[d][0] < K[d][1]))
            throw std::invalid_argument("build_cutoff: degenerate core box");
        if (!(K[d][0] > grid.lo[d] + grid.h[d] - 1e-14) ||
            !(K[d][1] < grid.hi[d] - grid.h[d] + 1e-14))
            throw std::invalid_argument(
                "build_cutoff: core box must leave at least one transition "
                "cell to the boundary");
    }
    CutoffProfile c;
    c.K = K;
    c.order = transition_order;
    c.phi = zero_field(grid);
    for (int iy = 0; iy < grid.n[1]; ++iy)
        for (int ix = 0; ix < grid.n[0]; ++ix) {
            double v = axis_profile(grid.x(ix), grid.lo[0], grid.hi[0],
                                    K[0][0], K[0][1], transition_order);
            if (grid.dim == 2)
                v *= axis_profile(grid.y(iy), grid.lo[1], grid.hi[1],
                                  K[1][0], K[1][1], transition_order);
            c.phi[grid.index(ix, iy)] = v;
        }
    apply_dirichlet(c.phi, grid);
    return c;
}

double energy_p(const Field& u0, const Nonlinearity& f, double zeta0, double p,
                const Grid& grid) {
    Field Fu(u0.size());
    for (size_t k = 0; k < u0.size(); ++k) Fu[k] = f.F(u0[k]);
    return grad_p_energy(u0, p, 0.0, grid) / p - zeta0 * integrate(Fu, grid);
}

PropositionLambda proposition_lambda(const CutoffProfile& cutoff,
                                     const Nonlinearity& f, double zeta0,
                                     double p, double kappa,
                                     const Grid& grid, double lambda_cap) {
    if (!(zeta0 > 0.0))
        throw std::invalid_argument("proposition_lambda: zeta(0) <= 0");
    if (!(kappa > p) || !(p > 2.0))
        throw std::invalid_argument("proposition_lambda: needs kappa > p > 2");

    auto Ep = [&](double lam) {
        Field u(cutoff.phi.size());
        for (size_t k = 0; k < u.size(); ++k) u[k] = lam * cutoff.phi[k];
        return energy_p(u, f, zeta0, p, grid);
    };

    PropositionLambda out;
    out.grad_p_phi = grad_p_energy(cutoff.phi, p, 0.0, grid);

    // sufficient threshold from the growth bound F(u) >= C u^kappa for u >= 1,
    // with C~ = zeta(0) * C_growth * |K|
    double c_growth = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 64; ++i) {
        const double u = std::pow(10.0, 3.0 * i / 64.0);  // [1, 1e3]
        c_growth = std::min(c_growth, f.F(u) / std::pow(u, kappa));
    }
    double core_measure = cutoff.K[0][1] - cutoff.K[0][0];
    if (grid.dim == 2) core_measure *= cutoff.K[1][1] - cutoff.K[1][0];
    if (c_growth > 0.0 && std::isfinite(c_growth)) {
        const double c_tilde = zeta0 * c_growth * core_measure;
        out.sufficient_threshold =
            std::pow(out.grad_p_phi / (p * c_tilde), 1.0 / (kappa - p));
    }

    if (Ep(1.0) <= 0.0) {
        out.lambda_star = 1.0;
        return out;
    }
    double lo = 1.0, hi = 2.0;
    while (Ep(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > lambda_cap)
            throw std::runtime_error(
                "proposition_lambda: E_p(lambda phi) stays positive below the "
                "lambda cap (growth/(fF) failure)");
    }
    while (hi - lo > 1e-8 * hi) {
        const double mid = 0.5 * (lo + hi);
        (Ep(mid) > 0.0 ? lo : hi) = mid;
    }
    out.lambda_star = hi;  // the side with E_p <= 0
    return out;
}

bool in_blowup_set(const Field& u0, const Nonlinearity& f, double zeta0,
                   double p, const Grid& grid) {
    if (sup_norm(u0) == 0.0) return false;
    return energy_p(u0, f, zeta0, p, grid) <= 0.0;
}

}  // namespace blowuplab
