#pragma once

#include "blowuplab/grid.hpp"
#include "blowuplab/model.hpp"

#include <array>

namespace blowuplab {

// Smooth cutoff: phi = 1 on the core box K, 0 on the boundary, polynomial
// transition of the given order in between (1 = tent, 3 = cubic, 5 = quintic).
struct CutoffProfile {
    std::array<std::array<double, 2>, 2> K{};  // core box per axis
    Field phi;
    int order = 5;
};

CutoffProfile build_cutoff(const Grid& grid,
                           const std::array<std::array<double, 2>, 2>& K,
                           int transition_order = 5);

// E_p evaluated on a candidate initial datum
double energy_p(const Field& u0, const Nonlinearity& f, double zeta0, double p,
                const Grid& grid);

struct PropositionLambda {
    double lambda_star = 1.0;       // minimal lambda with E_p(lambda phi) <= 0
    double sufficient_threshold = 0.0;   // (||grad phi||_p^p / (p C~))^{1/(kappa-p)}
    double grad_p_phi = 0.0;        // \int |grad phi|^p
};

PropositionLambda proposition_lambda(const CutoffProfile& cutoff,
                                     const Nonlinearity& f, double zeta0,
                                     double p, double kappa,
                                     const Grid& grid,
                                     double lambda_cap = 1e12);

// u0 in E  <=>  u0 not identically 0 and E_p(u0) <= 0
bool in_blowup_set(const Field& u0, const Nonlinearity& f, double zeta0,
                   double p, const Grid& grid);

}  // namespace blowuplab
