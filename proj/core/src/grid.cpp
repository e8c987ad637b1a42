#include "blowuplab/grid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blowuplab {

double Grid::weight(int ix, int iy) const {
    double w = h[0] * ((ix == 0 || ix == n[0] - 1) ? 0.5 : 1.0);
    if (dim == 2) w *= h[1] * ((iy == 0 || iy == n[1] - 1) ? 0.5 : 1.0);
    return w;
}

Grid build_grid(GridKind kind,
                const std::array<std::array<double, 2>, 2>& bounds,
                const std::array<int, 2>& n) {
    Grid g;
    g.kind = kind;
    g.dim = (kind == GridKind::Interval) ? 1 : 2;
    g.measure = 1.0;
    for (int d = 0; d < g.dim; ++d) {
        const double a = bounds[d][0], b = bounds[d][1];
        if (!(a < b)) throw std::invalid_argument("build_grid: degenerate bounds");
        if (n[d] < 3) throw std::invalid_argument("build_grid: need n >= 3 per axis");
        g.lo[d] = a;
        g.hi[d] = b;
        g.n[d] = n[d];
        g.h[d] = (b - a) / (n[d] - 1);
        g.measure *= (b - a);
    }
    if (g.dim == 1) {
        g.n[1] = 1;
        g.h[1] = 0.0;
    }
    return g;
}

Grid build_interval(double a, double b, int n) {
    return build_grid(GridKind::Interval, {{{a, b}, {0.0, 0.0}}}, {n, 1});
}

Grid build_rectangle(double ax, double bx, double ay, double by, int nx, int ny) {
    return build_grid(GridKind::Rectangle, {{{ax, bx}, {ay, by}}}, {nx, ny});
}

static void check_shape(const Field& field, const Grid& grid) {
    if (static_cast<int>(field.size()) != grid.num_nodes())
        throw std::invalid_argument("field/grid shape mismatch");
}

double integrate(const Field& field, const Grid& grid) {
    check_shape(field, grid);
    double sum = 0.0;
    for (int iy = 0; iy < grid.n[1]; ++iy)
        for (int ix = 0; ix < grid.n[0]; ++ix)
            sum += grid.weight(ix, iy) * field[grid.index(ix, iy)];
    return sum;
}

double lp_norm(const Field& field, const Grid& grid, double q) {
    if (q < 1.0) throw std::invalid_argument("lp_norm: q < 1");
    check_shape(field, grid);
    double sum = 0.0;
    for (int iy = 0; iy < grid.n[1]; ++iy)
        for (int ix = 0; ix < grid.n[0]; ++ix)
            sum += grid.weight(ix, iy) *
                   std::pow(std::abs(field[grid.index(ix, iy)]), q);
    return std::pow(sum, 1.0 / q);
}

double sup_norm(const Field& field) {
    double m = 0.0;
    for (double v : field) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const Field& field) {
    for (double v : field)
        if (!std::isfinite(v)) return false;
    return true;
}

void apply_dirichlet(Field& field, const Grid& grid) {
    check_shape(field, grid);
    for (int iy = 0; iy < grid.n[1]; ++iy)
        for (int ix = 0; ix < grid.n[0]; ++ix)
            if (grid.is_boundary(ix, iy)) field[grid.index(ix, iy)] = 0.0;
}

Field zero_field(const Grid& grid) {
    return Field(static_cast<size_t>(grid.num_nodes()), 0.0);
}

Field sample_field(const Grid& grid, const std::function<double(double)>& fn) {
    if (grid.dim != 1)
        throw std::invalid_argument("sample_field: 1D sampler on 2D grid");
    Field f = zero_field(grid);
    for (int ix = 0; ix < grid.n[0]; ++ix) f[ix] = fn(grid.x(ix));
    return f;
}

Field sample_field(const Grid& grid,
                   const std::function<double(double, double)>& fn) {
    Field f = zero_field(grid);
    for (int iy = 0; iy < grid.n[1]; ++iy)
        for (int ix = 0; ix < grid.n[0]; ++ix)
            f[grid.index(ix, iy)] = fn(grid.x(ix), grid.dim == 2 ? grid.y(iy) : 0.0);
    return f;
}

void write_field_csv(const std::string& path, const Field& field,
                     const Grid& grid) {
    check_shape(field, grid);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out.precision(17);
    out << (grid.dim == 2 ? "x,y,value\n" : "x,value\n");
    for (int iy = 0; iy < grid.n[1]; ++iy)
        for (int ix = 0; ix < grid.n[0]; ++ix) {
            out << grid.x(ix);
            if (grid.dim == 2) out << ',' << grid.y(iy);
            out << ',' << field[grid.index(ix, iy)] << '\n';
        }
}

Field read_field_csv(const std::string& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    Field f = zero_field(grid);
    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= grid.num_nodes())
            throw std::runtime_error("field csv has too many rows: " + path);
        std::stringstream ss(line);
        std::string cell;
        double value = 0.0;
        while (std::getline(ss, cell, ',')) value = std::stod(cell);
        f[row++] = value;
    }
    if (row != grid.num_nodes())
        throw std::runtime_error("field csv row count mismatch: " + path);
    apply_dirichlet(f, grid);
    return f;
}

}  // namespace blowuplab
