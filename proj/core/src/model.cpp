#include "blowuplab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blowuplab {

double Nonlinearity::F(double s) const {
    if (F_closed) return F_closed(s);
    if (F_cache) return (*F_cache)(s);
    throw std::runtime_error("Nonlinearity: no antiderivative available");
}

double Coefficient::Theta(double t) const {
    if (!theta_cache) throw std::runtime_error("Coefficient: no Theta cache");
    return (*theta_cache)(t);
}

double Coefficient::zeta_deriv(double t) const {
    if (zeta_prime) return zeta_prime(t);
    const double e = 1e-4 * std::max(1.0, std::abs(t));
    if (t >= 2.0 * e) {
        return (-zeta(t + 2 * e) + 8 * zeta(t + e) - 8 * zeta(t - e) +
                zeta(t - 2 * e)) / (12 * e);
    }
    return (-3 * zeta(t) + 4 * zeta(t + e) - zeta(t + 2 * e)) / (2 * e);
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Th1: return "Th1";
        case Regime::Th2: return "Th2";
        case Regime::Th3: return "Th3";
        default: return "exploratory";
    }
}

Regime parse_regime(const std::string& s) {
    if (s == "Th1") return Regime::Th1;
    if (s == "Th2") return Regime::Th2;
    if (s == "Th3") return Regime::Th3;
    if (s == "exploratory") return Regime::Exploratory;
    throw std::invalid_argument("unknown regime: " + s);
}

bool AssumptionReport::all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) {
        return c.status == CheckStatus::Holds;
    });
}

const AssumptionCheck* AssumptionReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

std::vector<double> log_samples(double lo, double hi, int per_decade) {
    std::vector<double> s;
    const double decades = std::log10(hi / lo);
    const int n = std::max(2, static_cast<int>(decades * per_decade));
    s.reserve(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        s.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / n));
    return s;
}

AssumptionCheck check_f1(const Nonlinearity& f, const SamplingRange& r) {
    AssumptionCheck c{"f1"};
    if (std::abs(f.f(0.0)) > 1e-12) {
        c.status = CheckStatus::Fails;
        c.witness = 0.0;
        c.note = "f(0) != 0";
        return c;
    }
    // convexity via monotone chords on a symmetric log-spaced grid
    std::vector<double> pts;
    const auto pos = log_samples(r.lo, r.hi, r.per_decade / 8);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) pts.push_back(-*it);
    pts.push_back(0.0);
    pts.insert(pts.end(), pos.begin(), pos.end());
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double fs0 = f.f(pts[i]), fs1 = f.f(pts[i + 1]);
        const double slope = (fs1 - fs0) / (pts[i + 1] - pts[i]);
        const double scale = std::max({1.0, std::abs(fs0), std::abs(fs1)});
        if (slope < prev_slope - 1e-9 * scale) {
            c.status = CheckStatus::Fails;
            c.witness = pts[i];
            c.note = "chord slope decreases (non-convex)";
            return c;
        }
        prev_slope = std::max(prev_slope, slope);
    }
    c.status = CheckStatus::Holds;
    return c;
}

AssumptionCheck check_f2(const Nonlinearity& f, const SamplingRange& r) {
    AssumptionCheck c{"f2"};
    const double lo = std::max(f.lambda_pos, r.lo);
    for (double s : log_samples(lo, r.hi, r.per_decade / 8)) {
        if (!(f.f(s) > 0.0)) {
            c.status = CheckStatus::Fails;
            c.witness = s;
            c.note = "f(s) <= 0 beyond lambda_pos";
            return c;
        }
    }
    c.status = CheckStatus::Holds;
    return c;
}

AssumptionCheck check_f3(const Nonlinearity& f) {
    AssumptionCheck c{"f3"};
    const double s0 = 2.0 * std::max(1.0, f.lambda_pos);
    if (!(f.f(s0) > 0.0)) {
        c.status = CheckStatus::Undetermined;
        c.witness = s0;
        c.note = "f not positive at probe start";
        return c;
    }
    const TailProbe probe =
        probe_tail_convergence([&f](double s) { return 1.0 / f.f(s); }, s0);
    if (probe.convergent) {
        c.status = CheckStatus::Holds;
    } else {
        c.status = CheckStatus::Fails;
        c.witness = probe.witness;
        c.note = "improper integral of 1/f diverges";
    }
    return c;
}

AssumptionCheck check_z1(const Coefficient& z, const SamplingRange& r) {
    AssumptionCheck c{"z1"};
    if (z.tail == TailFlag::BelowOneForever) {
        c.status = CheckStatus::Fails;
        c.witness = r.horizon;
        c.note = "zeta < 1 for all large t: m = -infinity";
        return c;
    }
    const double m = compute_m(z, r.horizon, z.tail);
    c.note = "m = " + std::to_string(m);
    c.status = (z.tail == TailFlag::Unknown) ? CheckStatus::Undetermined
                                             : CheckStatus::Holds;
    return c;
}

AssumptionCheck check_ff1(const Nonlinearity& f, const SamplingRange& r) {
    AssumptionCheck c{"ff1"};
    if (!(f.epsilon > 0.0) || !(f.C0 > 0.0) || !(f.alpha > 2.0))
        throw std::invalid_argument(
            "check_assumptions: (ff1) needs epsilon > 0, C0 > 0, alpha > 2");
    bool small_s_only = true;
    std::optional<double> first_witness;
    const auto pos = log_samples(r.lo, r.hi, r.per_decade / 8);
    std::vector<double> pts;
    for (double s : pos) {
        pts.push_back(s);
        pts.push_back(-s);
    }
    for (double s : pts) {
        const double sf = s * f.f(s);
        const double Fv = (2.0 + f.epsilon) * f.F(s);
        const double grow = f.C0 * std::pow(std::abs(s), f.alpha);
        const double scale = std::max({1.0, std::abs(sf), std::abs(Fv), grow});
        if (sf < Fv - 1e-9 * scale) {
            c.status = CheckStatus::Fails;
            c.witness = s;
            c.note = "s f(s) < (2+eps) F(s)";
            return c;
        }
        if (Fv < grow - 1e-9 * scale) {
            if (!first_witness) first_witness = s;
            if (std::abs(s) >= 1.0) small_s_only = false;
        }
    }
    if (first_witness && !small_s_only) {
        c.status = CheckStatus::Fails;
        c.witness = first_witness;
        c.note = "(2+eps) F(s) < C0 |s|^alpha";
    } else {
        c.status = CheckStatus::Holds;
        if (first_witness)
            c.note = "C0 growth fails only for |s| < 1 (unused by the proof)";
    }
    return c;
}

AssumptionCheck check_z2(const Coefficient& z, const SamplingRange& r) {
    AssumptionCheck c{"z2"};
    if (!(z.zeta(0.0) > 0.0)) {
        c.status = CheckStatus::Fails;
        c.witness = 0.0;
        c.note = "zeta(0) <= 0";
        return c;
    }
    const int n = 512;
    for (int i = 0; i <= n; ++i) {
        const double t = r.horizon * i / n;
        const double zp = z.zeta_deriv(t);
        if (zp < -1e-8 * std::max(1.0, std::abs(z.zeta(t)))) {
            c.status = CheckStatus::Fails;
            c.witness = t;
            c.note = "zeta' < 0";
            return c;
        }
    }
    c.status = CheckStatus::Holds;
    return c;
}

AssumptionCheck check_fF(const Nonlinearity& f, double p,
                         const SamplingRange& r) {
    AssumptionCheck c{"fF"};
    if (!(f.kappa > p) || !(p > 2.0))
        throw std::invalid_argument(
            "check_assumptions: (fF) needs kappa > p > 2");
    const auto pos = log_samples(r.lo, r.hi, r.per_decade / 8);
    std::vector<double> pts;
    for (double s : pos) {
        pts.push_back(s);
        pts.push_back(-s);
    }
    for (double s : pts) {
        const double kF = f.kappa * f.F(s);
        const double sf = s * f.f(s);
        const double scale = std::max({1.0, std::abs(kF), std::abs(sf)});
        if (kF < -1e-9 * scale || kF > sf + 1e-9 * scale) {
            c.status = CheckStatus::Fails;
            c.witness = s;
            c.note = "0 <= kappa F(u) <= u f(u) violated";
            return c;
        }
    }
    c.status = CheckStatus::Holds;
    return c;
}

}  // namespace

AssumptionReport check_assumptions(const Nonlinearity& f, const Coefficient& z,
                                   Regime regime, double p,
                                   const SamplingRange& range) {
    AssumptionReport rep;
    switch (regime) {
        case Regime::Th1:
            rep.checks.push_back(check_f1(f, range));
            rep.checks.push_back(check_f2(f, range));
            rep.checks.push_back(check_f3(f));
            rep.checks.push_back(check_z1(z, range));
            break;
        case Regime::Th2:
            rep.checks.push_back(check_ff1(f, range));
            rep.checks.push_back(check_z2(z, range));
            break;
        case Regime::Th3:
            rep.checks.push_back(check_fF(f, p, range));
            rep.checks.push_back(check_z2(z, range));
            break;
        case Regime::Exploratory:
            break;
    }
    return rep;
}

double compute_m(const Coefficient& z, double horizon, TailFlag tail_flag) {
    if (!(horizon > 0.0)) throw std::invalid_argument("compute_m: horizon <= 0");
    if (tail_flag == TailFlag::BelowOneForever)
        throw std::runtime_error("compute_m: m = -infinity, (z1) violated");
    const int n = 4096;
    double m = 0.0;  // Theta(0) = 0
    for (int i = 1; i <= n; ++i)
        m = std::min(m, z.Theta(horizon * i / n));
    return m;
}

double threshold_C(const Nonlinearity& f, double lambda1, double search_cap) {
    const double lo = std::max(f.lambda_pos, 1e-12);
    auto g = [&](double s) { return f.f(s) - 2.0 * lambda1 * s; };
    const auto pts = log_samples(lo, search_cap, 64);
    if (g(pts.back()) < 0.0)
        throw std::runtime_error(
            "threshold_C: f(s) < 2 lambda1 s up to the search cap");
    // last sign change; convexity guarantees a single crossing beyond lambda_pos
    int last_bad = -1;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        if (g(pts[i]) < 0.0) last_bad = i;
    if (last_bad < 0) return lo;
    double a = pts[last_bad], b = pts[last_bad + 1];
    while (b - a > 1e-10 * std::max(1.0, b)) {
        const double mid = 0.5 * (a + b);
        (g(mid) < 0.0 ? a : b) = mid;
    }
    return std::max(b, f.lambda_pos);
}

void init_antiderivative(Nonlinearity& n) {
    if (!n.F_closed && !n.F_cache) {
        auto f = n.f;
        n.F_cache = std::make_shared<CumulativeIntegral>(
            [f](double s) { return f(s); }, 1e-12);
    }
}

Nonlinearity make_nonlinearity(const std::string& key) {
    Nonlinearity n;
    n.key = key;
    if (key.rfind("power:", 0) == 0) {
        const double q = std::stod(key.substr(6));
        if (!(q > 1.0)) throw std::invalid_argument("power:q needs q > 1");
        n.f = [q](double u) {
            return u == 0.0 ? 0.0 : std::pow(std::abs(u), q - 2.0) * u;
        };
        n.F_closed = [q](double u) { return std::pow(std::abs(u), q) / q; };
        n.alpha = q;
        n.epsilon = q > 2.0 ? q - 2.0 : 0.0;
        n.C0 = (2.0 + n.epsilon) / q;
        n.kappa = q;
        n.lambda_pos = 1e-6;
    } else if (key == "exp_minus_one") {
        n.f = [](double u) { return std::expm1(u); };
        n.F_closed = [](double u) { return std::expm1(u) - u; };
        n.lambda_pos = 1e-6;
    } else {
        throw std::invalid_argument("unknown nonlinearity key: " + key);
    }
    return n;
}

Nonlinearity make_nonlinearity_table(const std::vector<double>& s,
                                     const std::vector<double>& fs) {
    if (s.size() != fs.size() || s.size() < 2)
        throw std::invalid_argument("nonlinearity table needs >= 2 rows");
    for (size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1]))
            throw std::invalid_argument("nonlinearity table must be sorted in s");
    Nonlinearity n;
    n.key = "custom";
    n.f = [s, fs](double u) {
        if (u <= s.front()) return fs.front();
        if (u >= s.back()) return fs.back();
        const auto it = std::upper_bound(s.begin(), s.end(), u);
        const size_t i = static_cast<size_t>(it - s.begin());
        const double w = (u - s[i - 1]) / (s[i] - s[i - 1]);
        return (1.0 - w) * fs[i - 1] + w * fs[i];
    };
    init_antiderivative(n);
    return n;
}

Coefficient make_coefficient(const std::string& key) {
    Coefficient c;
    c.key = key;
    if (key == "one") {
        c.zeta = [](double) { return 1.0; };
        c.zeta_prime = [](double) { return 0.0; };
        c.tail = TailFlag::GeOneEventually;
    } else if (key == "exp_t2") {
        c.zeta = [](double t) { return std::exp(t * t); };
        c.zeta_prime = [](double t) { return 2.0 * t * std::exp(t * t); };
        c.tail = TailFlag::GeOneEventually;
    } else if (key.rfind("linear:", 0) == 0) {
        const auto args = key.substr(7);
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("linear coefficient needs 'linear:a,b'");
        const double a = std::stod(args.substr(0, comma));
        const double b = std::stod(args.substr(comma + 1));
        c.zeta = [a, b](double t) { return a + b * t; };
        c.zeta_prime = [b](double) { return b; };
        c.tail = (b > 0.0 || (b == 0.0 && a >= 1.0)) ? TailFlag::GeOneEventually
                                                     : TailFlag::BelowOneForever;
    } else {
        throw std::invalid_argument("unknown coefficient key: " + key);
    }
    auto zeta = c.zeta;
    c.theta_cache = std::make_shared<CumulativeIntegral>(
        [zeta](double s) { return zeta(s) - 1.0; }, 1e-12);
    return c;
}

}  // namespace blowuplab
