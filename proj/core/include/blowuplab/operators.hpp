#pragma once

#include "blowuplab/grid.hpp"

namespace blowuplab {

// |grad u| sampled at cell faces. gx lives on x-faces ((n0-1) x n1 values,
// ix-fastest), gy on y-faces (n0 x (n1-1)). 1D grids use gx only.
struct FaceGradients {
    std::vector<double> gx;
    std::vector<double> gy;
    double max_abs() const;
};

FaceGradients gradient_magnitude(const Field& field, const Grid& grid);

// div((|grad u|^2 + eps_reg^2)^{(p-2)/2} grad u) in conservative flux form.
// Interior nodes only; boundary values 0. Requires p >= 2.
Field p_laplacian_apply(const Field& field, double p, double eps_reg,
                        const Grid& grid);

// Face-quadrature value of \int (|grad u|^2 + eps^2)^{(p-2)/2} |grad u|^2.
// With eps = 0 this is the discrete \int |grad u|^p used by every energy
// functional; it satisfies summation-by-parts against p_laplacian_apply
// exactly.
double grad_p_energy(const Field& field, double p, double eps_reg,
                     const Grid& grid);

struct EigenPair {
    double lambda1 = 0.0;
    Field phi1;              // positive interior, integrate(phi1) = 1
    double residual = 0.0;   // ||Lap phi1 + lambda1 phi1||_inf
    int iterations = 0;
};

// Principal Dirichlet eigenpair of -Laplacian by inverse power iteration on
// the Cholesky-factored 3-point/5-point operator. Deterministic all-ones
// interior start; sign flipped positive; mass-normalized integrate(phi1)=1.
EigenPair principal_eigenpair(const Grid& grid, double tol = 1e-10,
                              int max_iter = 10000);

struct PoincareConstant {
    double C = 0.0;    // |Omega|^{1-2/p} * mu1^{-2/p}
    double p = 0.0;
    double mu1 = 0.0;  // min over Dirichlet fields of \int|grad u|^p / \int|u|^p
    int iterations = 0;
};

// Rayleigh-quotient minimization by Laplacian-preconditioned projected
// gradient descent started from phi1. Supports p = 2 as a diagnostic, where
// mu1 must reproduce lambda1.
PoincareConstant poincare_constant(const Grid& grid, double p,
                                   double tol = 1e-10, int max_iter = 20000);

}  // namespace blowuplab
