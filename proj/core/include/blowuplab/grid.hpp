#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace blowuplab {

enum class GridKind { Interval, Rectangle };

// Grid function on a uniform tensor grid, stored row-major (ix fastest).
// Dirichlet fields carry explicit zeros on boundary nodes.
using Field = std::vector<double>;

struct Grid {
    GridKind kind = GridKind::Interval;
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 0.0};
    std::array<int, 2> n{3, 1};       // nodes per axis; n[1]=1 in 1D
    std::array<double, 2> h{0.0, 0.0};
    double measure = 0.0;             // |Omega|

    int num_nodes() const { return n[0] * n[1]; }
    int index(int ix, int iy = 0) const { return iy * n[0] + ix; }
    double x(int ix) const { return lo[0] + ix * h[0]; }
    double y(int iy) const { return lo[1] + iy * h[1]; }
    bool is_boundary(int ix, int iy = 0) const {
        if (ix == 0 || ix == n[0] - 1) return true;
        return dim == 2 && (iy == 0 || iy == n[1] - 1);
    }
    // trapezoid quadrature weight of a node
    double weight(int ix, int iy = 0) const;
};

Grid build_grid(GridKind kind,
                const std::array<std::array<double, 2>, 2>& bounds,
                const std::array<int, 2>& n);

// convenience constructors
Grid build_interval(double a, double b, int n);
Grid build_rectangle(double ax, double bx, double ay, double by, int nx, int ny);

// composite trapezoid value of \int_Omega field dx (field need not vanish on
// the boundary; Dirichlet fields simply contribute zero there)
double integrate(const Field& field, const Grid& grid);

// (\int |field|^q)^{1/q}; requires q >= 1
double lp_norm(const Field& field, const Grid& grid, double q);

double sup_norm(const Field& field);

bool all_finite(const Field& field);

// enforce exact zeros on boundary nodes
void apply_dirichlet(Field& field, const Grid& grid);

Field zero_field(const Grid& grid);

// evaluate fn(x) or fn2(x,y) at every node
Field sample_field(const Grid& grid, const std::function<double(double)>& fn);
Field sample_field(const Grid& grid,
                   const std::function<double(double, double)>& fn);

// CSV: header "x,value" (1D) or "x,y,value" (2D), one row per node
void write_field_csv(const std::string& path, const Field& field,
                     const Grid& grid);
Field read_field_csv(const std::string& path, const Grid& grid);

}  // namespace blowuplab
