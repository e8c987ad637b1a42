#pragma once

#include "blowuplab/quadrature.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace blowuplab {

// f with antiderivative F(s) = \int_0^s f, plus the structural parameters the
// verification regimes refer to. F uses the registered closed form when
// available and a
// cached adaptive quadrature otherwise.
struct Nonlinearity {
    std::string key = "custom";
    std::function<double(double)> f;
    std::function<double(double)> F_closed;  // optional

    double alpha = 0.0;       // growth exponent in (ff1), > 2
    double epsilon = 0.0;     // slack in (ff1), > 0
    double C0 = 0.0;          // lower constant in (ff1)
    double kappa = 0.0;       // exponent in (fF)
    double lambda_pos = 1.0;  // positivity threshold of (f2)

    double F(double s) const;

    std::shared_ptr<CumulativeIntegral> F_cache;
};

enum class TailFlag { GeOneEventually, BelowOneForever, Unknown };

// zeta(t) with Theta(t) = \int_0^t (zeta - 1) and m = inf Theta.
struct Coefficient {
    std::string key = "custom";
    std::function<double(double)> zeta;
    std::function<double(double)> zeta_prime;  // optional; central diff fallback

    double m = 0.0;
    TailFlag tail = TailFlag::Unknown;

    double Theta(double t) const;
    double zeta_deriv(double t) const;

    std::shared_ptr<CumulativeIntegral> theta_cache;
};

enum class Regime { Th1, Th2, Th3, Exploratory };

std::string regime_name(Regime r);
Regime parse_regime(const std::string& s);

enum class CheckStatus { Holds, Fails, Undetermined };

struct AssumptionCheck {
    std::string name;                  // "f1", "f2", ...
    CheckStatus status = CheckStatus::Undetermined;
    std::optional<double> witness;     // s- or t-value violating it
    std::string note;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool all_hold() const;
    const AssumptionCheck* find(const std::string& name) const;
};

struct ModelProfile {
    Nonlinearity f;
    Coefficient zeta;
    double p = 2.0;
};

struct SamplingRange {
    double lo = 1e-6;
    double hi = 1e6;
    int per_decade = 512;
    double horizon = 10.0;  // time horizon for zeta checks
};

AssumptionReport check_assumptions(const Nonlinearity& f, const Coefficient& z,
                                   Regime regime, double p = 2.0,
                                   const SamplingRange& range = {});

// m = inf_{t>=0} Theta(t), minimized on [0, horizon]; the tail flag declares
// the sign of zeta - 1 beyond the horizon. BelowOneForever means m = -inf
// and throws.
double compute_m(const Coefficient& z, double horizon, TailFlag tail_flag);

// smallest C >= lambda_pos with f(s) >= 2 lambda1 s for all sampled s >= C
double threshold_C(const Nonlinearity& f, double lambda1,
                   double search_cap = 1e9);

// registry --------------------------------------------------------------
// nonlinearity keys: "power:q" (f = |u|^{q-2} u), "exp_minus_one",
//                    "custom" via table (s, f(s)) with linear interpolation
// coefficient keys:  "one", "exp_t2", "linear:a,b", "custom"
Nonlinearity make_nonlinearity(const std::string& key);

// attach a cached-quadrature antiderivative when no closed form is registered
void init_antiderivative(Nonlinearity& n);
Nonlinearity make_nonlinearity_table(const std::vector<double>& s,
                                     const std::vector<double>& fs);
Coefficient make_coefficient(const std::string& key);

}  // namespace blowuplab
