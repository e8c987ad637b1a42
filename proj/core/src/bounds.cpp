#include "blowuplab/bounds.hpp"

#include "blowuplab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace blowuplab {

nlohmann::json BoundReport::to_json() const {
    nlohmann::json j;
    j["regime"] = regime;
    if (applicable) {
        j["T_star"] = std::isfinite(T_star) ? nlohmann::json(T_star)
                                            : nlohmann::json("inf");
    } else {
        j["T_star"] = nullptr;
    }
    j["applicable"] = applicable;
    if (!message.empty()) j["message"] = message;
    j["inputs"] = inputs;
    j["quad_error"] = quad_error;
    return j;
}

namespace {

constexpr double kQuadErrorCap = 1e-8;

void finalize_quadrature(BoundReport& r, const QuadResult& q, double offset) {
    r.T_star = offset + q.value;
    r.quad_error = q.error / std::max(std::abs(r.T_star), 1e-300);
    if (r.quad_error > kQuadErrorCap) {
        r.applicable = false;
        r.message = "quadrature error estimate above 1e-8 relative";
    }
}

}  // namespace

BoundReport tmax1(const Nonlinearity& f, double m, double lambda1,
                  double mass0) {
    if (!(lambda1 > 0.0)) throw std::invalid_argument("tmax1: lambda1 <= 0");
    if (m > 0.0) throw std::invalid_argument("tmax1: m must be <= 0");
    BoundReport r;
    r.regime = "Th1";
    const double y0 = std::exp(m * lambda1) * mass0;
    const double C = threshold_C(f, lambda1);
    r.inputs = {{"m", m}, {"lambda1", lambda1}, {"mass0", mass0},
                {"y0", y0}, {"threshold_C", C}};
    if (!(y0 > C)) {
        r.applicable = false;
        r.message = "largeness condition unmet: y0 <= threshold_C";
        return r;
    }
    try {
        const QuadResult q = integrate_to_infinity(
            [&f](double s) { return 1.0 / f.f(s); }, y0, 1e-10);
        r.T_star = -m + 2.0 * q.value;
        r.quad_error = 2.0 * q.error / std::max(std::abs(r.T_star), 1e-300);
        if (r.quad_error > kQuadErrorCap) {
            r.applicable = false;
            r.message = "quadrature error estimate above 1e-8 relative";
        }
    } catch (const std::runtime_error&) {
        r.applicable = false;
        r.message = "divergent tail: (f3) violated";
    }
    return r;
}

double constant_A(double epsilon, double C0, double alpha, double zeta0,
                  double omega_measure) {
    if (!(epsilon > 0.0) || !(C0 > 0.0) || !(zeta0 > 0.0) ||
        !(omega_measure > 0.0))
        throw std::invalid_argument("constant_A: inputs must be positive");
    if (!(alpha > 2.0)) throw std::invalid_argument("constant_A: alpha <= 2");
    return std::pow(2.0, 0.5 * alpha) * C0 * epsilon * zeta0 /
           ((2.0 + epsilon) * std::pow(omega_measure, 0.5 * alpha - 1.0));
}

BoundReport tmax2(double E0, double norm_u0_2, double A, double alpha) {
    if (!(A > 0.0)) throw std::invalid_argument("tmax2: A <= 0");
    if (!(alpha > 2.0)) throw std::invalid_argument("tmax2: alpha <= 2");
    if (!(norm_u0_2 > 0.0)) throw std::invalid_argument("tmax2: ||u0||_2 <= 0");
    BoundReport r;
    r.regime = "Th2";
    const double y0 = 0.5 * norm_u0_2 * norm_u0_2;
    r.inputs = {{"E0", E0}, {"norm_u0_2", norm_u0_2}, {"A", A},
                {"alpha", alpha}, {"y0", y0}};
    if (E0 <= 0.0) {
        r.T_star = std::pow(y0, 1.0 - 0.5 * alpha) / (A * (0.5 * alpha - 1.0));
        return r;
    }
    const double lead = A * std::pow(y0, 0.5 * alpha);
    if (!(lead - 2.0 * E0 >= 1e-12 * lead)) {
        r.applicable = false;
        r.message = "largeness condition unmet: A y0^{alpha/2} <= 2 E0";
        return r;
    }
    const QuadResult q = integrate_to_infinity(
        [A, alpha, E0](double z) {
            return 1.0 / (A * std::pow(z, 0.5 * alpha) - 2.0 * E0);
        },
        y0, 1e-10);
    finalize_quadrature(r, q, 0.0);
    return r;
}

BoundReport lemma_bound(double C1, double C2, double p, double y0) {
    if (!(C2 > 0.0)) throw std::invalid_argument("lemma_bound: C2 <= 0");
    if (!(p > 1.0)) throw std::invalid_argument("lemma_bound: p <= 1");
    if (!(y0 > 0.0)) throw std::invalid_argument("lemma_bound: y0 <= 0");
    BoundReport r;
    r.regime = "Lemma";
    r.inputs = {{"C1", C1}, {"C2", C2}, {"p", p}, {"y0", y0}};
    if (C1 <= 0.0) {
        r.T_star = std::pow(y0, 1.0 - p) / (C2 * (p - 1.0));
        return r;
    }
    const double lead = C2 * std::pow(y0, p);
    if (!(lead - C1 >= 1e-12 * lead)) {
        r.applicable = false;
        r.message = "no blow-up guaranteed by this lemma: C2 y0^p <= C1";
        return r;
    }
    const QuadResult q = integrate_to_infinity(
        [C1, C2, p](double z) { return 1.0 / (C2 * std::pow(z, p) - C1); },
        y0, 1e-10);
    finalize_quadrature(r, q, 0.0);
    return r;
}

BoundReport tmax3(const PoincareConstant& C, double p, double kappa,
                  double L0) {
    if (!(p > 2.0)) throw std::invalid_argument("tmax3: p <= 2");
    if (!(kappa > p)) throw std::invalid_argument("tmax3: kappa <= p");
    if (!(L0 > 0.0)) throw std::invalid_argument("tmax3: L0 <= 0");
    if (!(C.C > 0.0)) throw std::invalid_argument("tmax3: C <= 0");
    BoundReport r;
    r.regime = "Th3";
    r.inputs = {{"C", C.C}, {"mu1", C.mu1}, {"p", p}, {"kappa", kappa},
                {"L0", L0}};
    r.T_star = 2.0 * p * std::pow(C.C, 0.5 * p) *
               std::pow(L0, 1.0 - 0.5 * p) / ((p - 2.0) * (kappa - p));
    return r;
}

}  // namespace blowuplab
