#pragma once

#include "blowuplab/model.hpp"
#include "blowuplab/operators.hpp"

#include <map>
#include <string>

#include <json.hpp>

namespace blowuplab {

// One evaluated theoretical blow-up-time upper bound. A bound whose
// hypotheses fail on the given inputs is returned with applicable = false
// and a message; invalid arguments throw instead.
struct BoundReport {
    std::string regime;  // Th1 | Th2 | Th3 | Lemma
    double T_star = std::numeric_limits<double>::infinity();
    bool applicable = true;
    std::string message;
    std::map<std::string, double> inputs;
    double quad_error = 0.0;  // relative a-posteriori estimate

    nlohmann::json to_json() const;
};

// T* = -m + 2 \int_{y0}^inf ds/f(s), y0 = e^{m lambda1} * mass0
BoundReport tmax1(const Nonlinearity& f, double m, double lambda1,
                  double mass0);

// A = 2^{alpha/2} C0 eps zeta(0) / ((2+eps) |Omega|^{alpha/2 - 1})
double constant_A(double epsilon, double C0, double alpha, double zeta0,
                  double omega_measure);

// Two-branch bound on the blow-up time from the L = ||u||_2^2/2 inequality.
BoundReport tmax2(double E0, double norm_u0_2, double A, double alpha);

// Bound for y' >= -C1 + C2 y^p with y(0) = y0.
BoundReport lemma_bound(double C1, double C2, double p, double y0);

// T* <= 2p C^{p/2} L(0)^{1-p/2} / ((p-2)(kappa-p))
BoundReport tmax3(const PoincareConstant& C, double p, double kappa,
                  double L0);

}  // namespace blowuplab
