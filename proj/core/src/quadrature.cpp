#include "blowuplab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace blowuplab {

namespace {

// Kronrod-15 abscissae on [-1,1] (symmetric) and weights, with the embedded
// Gauss-7 weights on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
    double gk = 0.0;
    double g = 0.0;
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    PanelEval out;
    const double fc = f(c);
    out.gk = kWgk[7] * fc;
    out.g = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = half * kXgk[i];
        const double fsum = f(c - x) + f(c + x);
        out.gk += kWgk[i] * fsum;
        if (i % 2 == 1) out.g += kWg[i / 2] * fsum;
    }
    out.gk *= half;
    out.g *= half;
    return out;
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double tol, int depth, int max_depth, QuadResult& acc) {
    const PanelEval e = gk15(f, a, b);
    const double err = std::abs(e.gk - e.g);
    if (err <= tol || depth >= max_depth) {
        acc.value += e.gk;
        acc.error += err;
        return;
    }
    const double c = 0.5 * (a + b);
    adapt(f, a, c, 0.5 * tol, depth + 1, max_depth, acc);
    adapt(f, c, b, 0.5 * tol, depth + 1, max_depth, acc);
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b,
                              double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return {};
    const PanelEval coarse = gk15(f, a, b);
    const double tol =
        std::max(abs_tol, rel_tol * std::max(1e-300, std::abs(coarse.gk)));
    QuadResult acc;
    adapt(f, a, b, tol, 0, max_depth, acc);
    return acc;
}

QuadResult integrate_to_infinity(const std::function<double(double)>& f,
                                 double a, double rel_tol, int max_panels) {
    if (!(a > 0.0))
        throw std::invalid_argument("integrate_to_infinity: lower limit must be > 0");
    QuadResult total;
    double lo = a;
    double prev_inc = 0.0;
    for (int j = 0; j < max_panels; ++j) {
        const double hi = 2.0 * lo;
        const QuadResult panel = integrate_adaptive(f, lo, hi, rel_tol * 0.1);
        total.value += panel.value;
        total.error += panel.error;
        const double inc = std::abs(panel.value);
        if (j > 2 && inc <= rel_tol * 1e-2 * std::max(1e-300, std::abs(total.value))) {
            // tail estimate from the geometric decay ratio of panel sums
            double tail = inc;
            if (prev_inc > 0.0) {
                const double r = inc / prev_inc;
                if (r < 0.999) tail = inc * r / (1.0 - r);
            }
            total.error += tail;
            return total;
        }
        prev_inc = inc;
        lo = hi;
    }
    throw std::runtime_error(
        "integrate_to_infinity: panel sum did not converge (divergent tail?)");
}

TailProbe probe_tail_convergence(const std::function<double(double)>& f,
                                 double a, int max_panels) {
    TailProbe probe;
    double lo = a;
    double value = 0.0;
    double prev_inc = -1.0;
    int stagnant = 0;
    for (int j = 0; j < max_panels; ++j) {
        const double hi = 2.0 * lo;
        const QuadResult panel = integrate_adaptive(f, lo, hi, 1e-10);
        value += panel.value;
        const double inc = std::abs(panel.value);
        if (inc <= 1e-10 * std::max(1.0, std::abs(value))) {
            probe.convergent = true;
            probe.value = value;
            return probe;
        }
        // non-shrinking increments over many octaves signal divergence
        if (prev_inc >= 0.0 && inc >= 0.9 * prev_inc) {
            if (++stagnant >= 40) {
                probe.convergent = false;
                probe.witness = hi;
                return probe;
            }
        } else {
            stagnant = 0;
        }
        prev_inc = inc;
        lo = hi;
    }
    probe.convergent = false;
    probe.witness = lo;
    return probe;
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       double rel_tol)
    : f_(std::move(f)), rel_tol_(rel_tol) {
    checkpoints_[0.0] = 0.0;
}

double CumulativeIntegral::operator()(double s) const {
    if (!f_) throw std::runtime_error("CumulativeIntegral: no integrand");
    std::lock_guard lock(mutex_);
    if (checkpoints_.empty()) checkpoints_[0.0] = 0.0;
    // nearest checkpoint toward zero from s
    auto it = checkpoints_.upper_bound(s);
    double base_s, base_v;
    if (it == checkpoints_.begin()) {
        base_s = it->first;
        base_v = it->second;
    } else {
        auto below = std::prev(it);
        if (s >= 0.0 || it == checkpoints_.end()) {
            base_s = below->first;
            base_v = below->second;
        } else {
            // pick whichever side is closer for negative queries
            base_s = (s - below->first <= it->first - s) ? below->first : it->first;
            base_v = (base_s == below->first) ? below->second : it->second;
        }
    }
    if (base_s == s) return base_v;
    const QuadResult gap = integrate_adaptive(f_, base_s, s, rel_tol_);
    const double v = base_v + gap.value;
    checkpoints_[s] = v;
    return v;
}

}  // namespace blowuplab
