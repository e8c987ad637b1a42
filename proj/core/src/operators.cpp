#include "blowuplab/operators.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace blowuplab {

namespace {

void check_shape(const Field& field, const Grid& grid) {
    if (static_cast<int>(field.size()) != grid.num_nodes())
        throw std::invalid_argument("field/grid shape mismatch");
}

// node-centered du/dy: central in the interior, one-sided at walls
double dudy_at(const Field& u, const Grid& g, int ix, int iy) {
    const int ny = g.n[1];
    if (iy == 0) return (u[g.index(ix, 1)] - u[g.index(ix, 0)]) / g.h[1];
    if (iy == ny - 1)
        return (u[g.index(ix, ny - 1)] - u[g.index(ix, ny - 2)]) / g.h[1];
    return (u[g.index(ix, iy + 1)] - u[g.index(ix, iy - 1)]) / (2.0 * g.h[1]);
}

double dudx_at(const Field& u, const Grid& g, int ix, int iy) {
    const int nx = g.n[0];
    if (ix == 0) return (u[g.index(1, iy)] - u[g.index(0, iy)]) / g.h[0];
    if (ix == nx - 1)
        return (u[g.index(nx - 1, iy)] - u[g.index(nx - 2, iy)]) / g.h[0];
    return (u[g.index(ix + 1, iy)] - u[g.index(ix - 1, iy)]) / (2.0 * g.h[0]);
}

double flux_coef(double mag2, double p, double eps_reg) {
    if (p == 2.0) return 1.0;
    return std::pow(mag2 + eps_reg * eps_reg, 0.5 * (p - 2.0));
}

}  // namespace

double FaceGradients::max_abs() const {
    double m = 0.0;
    for (double v : gx) m = std::max(m, std::abs(v));
    for (double v : gy) m = std::max(m, std::abs(v));
    return m;
}

FaceGradients gradient_magnitude(const Field& field, const Grid& grid) {
    check_shape(field, grid);
    FaceGradients fg;
    const int nx = grid.n[0], ny = grid.n[1];
    fg.gx.assign(static_cast<size_t>((nx - 1) * ny), 0.0);
    if (grid.dim == 1) {
        for (int ix = 0; ix < nx - 1; ++ix)
            fg.gx[ix] = std::abs((field[ix + 1] - field[ix]) / grid.h[0]);
        return fg;
    }
    fg.gy.assign(static_cast<size_t>(nx * (ny - 1)), 0.0);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx - 1; ++ix) {
            const double gx =
                (field[grid.index(ix + 1, iy)] - field[grid.index(ix, iy)]) /
                grid.h[0];
            const double gt = 0.5 * (dudy_at(field, grid, ix, iy) +
                                     dudy_at(field, grid, ix + 1, iy));
            fg.gx[iy * (nx - 1) + ix] = std::sqrt(gx * gx + gt * gt);
        }
    for (int iy = 0; iy < ny - 1; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double gy =
                (field[grid.index(ix, iy + 1)] - field[grid.index(ix, iy)]) /
                grid.h[1];
            const double gt = 0.5 * (dudx_at(field, grid, ix, iy) +
                                     dudx_at(field, grid, ix, iy + 1));
            fg.gy[iy * nx + ix] = std::sqrt(gy * gy + gt * gt);
        }
    return fg;
}

Field p_laplacian_apply(const Field& field, double p, double eps_reg,
                        const Grid& grid) {
    if (p < 2.0) throw std::invalid_argument("p_laplacian_apply: p < 2");
    check_shape(field, grid);
    const FaceGradients fg = gradient_magnitude(field, grid);
    const int nx = grid.n[0], ny = grid.n[1];
    Field out = zero_field(grid);

    // x-fluxes
    std::vector<double> fx(static_cast<size_t>((nx - 1) * ny), 0.0);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx - 1; ++ix) {
            const double du =
                (field[grid.index(ix + 1, iy)] - field[grid.index(ix, iy)]) /
                grid.h[0];
            const double m = fg.gx[iy * (nx - 1) + ix];
            fx[iy * (nx - 1) + ix] = flux_coef(m * m, p, eps_reg) * du;
        }
    if (grid.dim == 1) {
        for (int ix = 1; ix < nx - 1; ++ix)
            out[ix] = (fx[ix] - fx[ix - 1]) / grid.h[0];
        return out;
    }
    std::vector<double> fy(static_cast<size_t>(nx * (ny - 1)), 0.0);
    for (int iy = 0; iy < ny - 1; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double du =
                (field[grid.index(ix, iy + 1)] - field[grid.index(ix, iy)]) /
                grid.h[1];
            const double m = fg.gy[iy * nx + ix];
            fy[iy * nx + ix] = flux_coef(m * m, p, eps_reg) * du;
        }
    for (int iy = 1; iy < ny - 1; ++iy)
        for (int ix = 1; ix < nx - 1; ++ix)
            out[grid.index(ix, iy)] =
                (fx[iy * (nx - 1) + ix] - fx[iy * (nx - 1) + ix - 1]) / grid.h[0] +
                (fy[iy * nx + ix] - fy[(iy - 1) * nx + ix]) / grid.h[1];
    return out;
}

double grad_p_energy(const Field& field, double p, double eps_reg,
                     const Grid& grid) {
    if (p < 1.0) throw std::invalid_argument("grad_p_energy: p < 1");
    check_shape(field, grid);
    const FaceGradients fg = gradient_magnitude(field, grid);
    const int nx = grid.n[0], ny = grid.n[1];
    const double wf = (grid.dim == 2) ? grid.h[0] * grid.h[1] : grid.h[0];
    double sum = 0.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx - 1; ++ix) {
            const double du =
                (field[grid.index(ix + 1, iy)] - field[grid.index(ix, iy)]) /
                grid.h[0];
            const double m = fg.gx[iy * (nx - 1) + ix];
            sum += wf * flux_coef(m * m, p, eps_reg) * du * du;
        }
    if (grid.dim == 2)
        for (int iy = 0; iy < ny - 1; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                const double du =
                    (field[grid.index(ix, iy + 1)] - field[grid.index(ix, iy)]) /
                    grid.h[1];
                const double m = fg.gy[iy * nx + ix];
                sum += wf * flux_coef(m * m, p, eps_reg) * du * du;
            }
    return sum;
}

// ---------------------------------------------------------------------------
// interior-node linear algebra for the 3-point/5-point Laplacian

namespace {

struct Interior {
    const Grid* grid = nullptr;
    int mx = 0, my = 0;  // interior nodes per axis
    int size() const { return mx * my; }
    int bandwidth() const { return grid->dim == 2 ? mx : 1; }

    int node(int i, int j) const {
        return grid->index(i + 1, grid->dim == 2 ? j + 1 : 0);
    }
    std::vector<double> restrict_interior(const Field& f) const {
        std::vector<double> v(static_cast<size_t>(size()));
        for (int j = 0; j < my; ++j)
            for (int i = 0; i < mx; ++i)
                v[j * mx + i] = f[node(i, j)];
        return v;
    }
    Field extend(const std::vector<double>& v) const {
        Field f = zero_field(*grid);
        for (int j = 0; j < my; ++j)
            for (int i = 0; i < mx; ++i)
                f[node(i, j)] = v[j * mx + i];
        return f;
    }
    // y = (-Lap) x on interior unknowns
    std::vector<double> apply(const std::vector<double>& x) const {
        const double cx = 1.0 / (grid->h[0] * grid->h[0]);
        const double cy = grid->dim == 2 ? 1.0 / (grid->h[1] * grid->h[1]) : 0.0;
        std::vector<double> y(x.size(), 0.0);
        for (int j = 0; j < my; ++j)
            for (int i = 0; i < mx; ++i) {
                const int k = j * mx + i;
                double v = 2.0 * (cx + cy) * x[k];
                if (i > 0) v -= cx * x[k - 1];
                if (i < mx - 1) v -= cx * x[k + 1];
                if (j > 0) v -= cy * x[k - mx];
                if (j < my - 1) v -= cy * x[k + mx];
                y[k] = v;
            }
        return y;
    }
};

Interior make_interior(const Grid& grid) {
    Interior in;
    in.grid = &grid;
    in.mx = grid.n[0] - 2;
    in.my = grid.dim == 2 ? grid.n[1] - 2 : 1;
    return in;
}

// Cholesky factorization of a banded SPD matrix, lower band storage
// l[d * n + j] = L(j + d, j), d = 0..bw.
class BandedCholesky {
public:
    BandedCholesky(const Interior& in) : n_(in.size()), bw_(in.bandwidth()) {
        std::vector<double> a(static_cast<size_t>((bw_ + 1) * n_), 0.0);
        const double cx = 1.0 / (in.grid->h[0] * in.grid->h[0]);
        const double cy =
            in.grid->dim == 2 ? 1.0 / (in.grid->h[1] * in.grid->h[1]) : 0.0;
        for (int j = 0; j < in.my; ++j)
            for (int i = 0; i < in.mx; ++i) {
                const int k = j * in.mx + i;
                a[k] = 2.0 * (cx + cy);
                if (i < in.mx - 1) a[n_ + k] = -cx;                // offset 1
                if (in.grid->dim == 2 && j < in.my - 1)
                    a[bw_ * n_ + k] = -cy;                        // offset bw
            }
        l_ = std::move(a);
        factor();
    }

    std::vector<double> solve(std::vector<double> b) const {
        // forward: L z = b
        for (int j = 0; j < n_; ++j) {
            double s = b[j];
            for (int d = 1; d <= bw_ && j - d >= 0; ++d)
                s -= l_[d * n_ + (j - d)] * b[j - d];
            b[j] = s / l_[j];
        }
        // backward: L^T x = z
        for (int j = n_ - 1; j >= 0; --j) {
            double s = b[j];
            for (int d = 1; d <= bw_ && j + d < n_; ++d)
                s -= l_[d * n_ + j] * b[j + d];
            b[j] = s / l_[j];
        }
        return b;
    }

private:
    void factor() {
        for (int j = 0; j < n_; ++j) {
            double diag = l_[j];
            for (int k = std::max(0, j - bw_); k < j; ++k) {
                const double ljk = l_[(j - k) * n_ + k];
                diag -= ljk * ljk;
            }
            if (diag <= 0.0)
                throw std::runtime_error("banded Cholesky: matrix not SPD");
            const double ljj = std::sqrt(diag);
            l_[j] = ljj;
            for (int d = 1; d <= bw_ && j + d < n_; ++d) {
                const int i = j + d;
                double s = l_[d * n_ + j];
                for (int k = std::max(0, i - bw_); k < j; ++k) {
                    if (j - k > bw_) continue;
                    s -= l_[(i - k) * n_ + k] * l_[(j - k) * n_ + k];
                }
                l_[d * n_ + j] = s / ljj;
            }
        }
    }

    int n_, bw_;
    std::vector<double> l_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

EigenPair principal_eigenpair(const Grid& grid, double tol, int max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("principal_eigenpair: tol <= 0");
    const Interior in = make_interior(grid);
    const BandedCholesky chol(in);

    std::vector<double> x(static_cast<size_t>(in.size()), 1.0);
    double lambda = 0.0, lambda_prev = -1.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        std::vector<double> z = chol.solve(x);
        const double nz = std::sqrt(dot(z, z));
        for (double& v : z) v /= nz;
        const std::vector<double> az = in.apply(z);
        lambda = dot(z, az);
        x = std::move(z);
        if (it > 0 && std::abs(lambda - lambda_prev) <= tol * std::abs(lambda))
            break;
        lambda_prev = lambda;
    }
    if (it == max_iter)
        throw std::runtime_error("principal_eigenpair: no convergence");

    EigenPair ep;
    ep.iterations = it + 1;
    ep.lambda1 = lambda;
    ep.phi1 = in.extend(x);
    // positive interior, mass normalization integrate(phi1) = 1
    double interior_sum = 0.0;
    for (double v : x) interior_sum += v;
    if (interior_sum < 0.0)
        for (double& v : ep.phi1) v = -v;
    const double mass = integrate(ep.phi1, grid);
    for (double& v : ep.phi1) v /= mass;

    const Field lap = p_laplacian_apply(ep.phi1, 2.0, 0.0, grid);
    double res = 0.0;
    for (int k = 0; k < grid.num_nodes(); ++k)
        res = std::max(res, std::abs(lap[k] + ep.lambda1 * ep.phi1[k]));
    ep.residual = res;
    return ep;
}

PoincareConstant poincare_constant(const Grid& grid, double p, double tol,
                                   int max_iter) {
    if (p < 2.0) throw std::invalid_argument("poincare_constant: p < 2");
    const EigenPair ep = principal_eigenpair(grid, 1e-10);
    const Interior in = make_interior(grid);
    const BandedCholesky chol(in);

    auto lp_p = [&](const Field& u) {
        double s = 0.0;
        for (int iy = 0; iy < grid.n[1]; ++iy)
            for (int ix = 0; ix < grid.n[0]; ++ix)
                s += grid.weight(ix, iy) *
                     std::pow(std::abs(u[grid.index(ix, iy)]), p);
        return s;
    };
    auto quotient = [&](const Field& u) {
        return grad_p_energy(u, p, 0.0, grid) / lp_p(u);
    };
    auto normalize = [&](Field& u) {
        const double d = std::pow(lp_p(u), 1.0 / p);
        for (double& v : u) v /= d;
    };

    Field u = ep.phi1;
    normalize(u);
    double R = quotient(u);
    double step = 1.0;
    int it = 0;
    int stalls = 0;
    for (; it < max_iter; ++it) {
        const double D = lp_p(u);
        const Field plap = p_laplacian_apply(u, p, 0.0, grid);
        // grad of N(u) is -p*w*plap; grad of D is p*w*|u|^{p-2}u; the node
        // weight w cancels against the Laplacian preconditioner's scaling
        Field g = zero_field(grid);
        const int iy_lo = grid.dim == 2 ? 1 : 0;
        const int iy_hi = grid.dim == 2 ? grid.n[1] - 1 : 1;
        for (int iy = iy_lo; iy < iy_hi; ++iy)
            for (int ix = 1; ix < grid.n[0] - 1; ++ix) {
                const int k = grid.index(ix, iy);
                const double uv = u[k];
                g[k] = (-p * plap[k] -
                        R * p * std::pow(std::abs(uv), p - 2.0) * uv) / D;
            }
        // precondition with (-Lap)^{-1}
        const std::vector<double> d = chol.solve(in.restrict_interior(g));
        const Field dir = in.extend(d);

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            Field trial = u;
            for (int k = 0; k < grid.num_nodes(); ++k)
                trial[k] -= step * dir[k];
            apply_dirichlet(trial, grid);
            normalize(trial);
            const double Rt = quotient(trial);
            if (Rt < R) {
                const double drop = (R - Rt) / std::max(R, 1e-300);
                u = std::move(trial);
                R = Rt;
                step *= 1.3;
                accepted = true;
                stalls = (drop < tol) ? stalls + 1 : 0;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) ++stalls;
        if (stalls >= 10) break;
    }
    if (it == max_iter)
        throw std::runtime_error("poincare_constant: descent did not converge");

    PoincareConstant pc;
    pc.p = p;
    pc.mu1 = R;
    pc.iterations = it;
    pc.C = std::pow(grid.measure, 1.0 - 2.0 / p) * std::pow(R, -2.0 / p);
    return pc;
}

}  // namespace blowuplab
