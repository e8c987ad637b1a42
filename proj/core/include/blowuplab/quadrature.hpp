#pragma once

#include <functional>
#include <map>
#include <mutex>

namespace blowuplab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // a-posteriori estimate, absolute
};

// Adaptive Gauss-Kronrod 7-15 on a finite interval.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b,
                              double rel_tol = 1e-12, double abs_tol = 1e-14,
                              int max_depth = 60);

// Integral over [a, inf) by geometric panel splitting [a,2a],[2a,4a],...
// Requires the integrand tail to decay faster than 1/z. The returned error
// includes a tail-extrapolation estimate from the panel decay ratio.
// Throws std::runtime_error if the panel sums fail to converge (divergent tail).
QuadResult integrate_to_infinity(const std::function<double(double)>& f,
                                 double a,
                                 double rel_tol = 1e-12,
                                 int max_panels = 5000);

// Convergence probe for improper integrals: returns true plus the value when
// the panel sum converges, false with a witness abscissa when it does not.
struct TailProbe {
    bool convergent = false;
    double value = 0.0;
    double witness = 0.0;  // abscissa where divergence was flagged
};
TailProbe probe_tail_convergence(const std::function<double(double)>& f,
                                 double a, int max_panels = 400);

// Cached cumulative integral s -> \int_0^s f, thread-safe. Gaps between
// cached checkpoints are closed with adaptive quadrature on demand.
class CumulativeIntegral {
public:
    explicit CumulativeIntegral(std::function<double(double)> f,
                                double rel_tol = 1e-12);
    CumulativeIntegral() = default;

    double operator()(double s) const;

private:
    std::function<double(double)> f_;
    double rel_tol_ = 1e-12;
    mutable std::map<double, double> checkpoints_;  // s -> \int_0^s f
    mutable std::mutex mutex_;
};

}  // namespace blowuplab
