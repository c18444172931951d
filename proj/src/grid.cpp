#include "fluxlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace fluxlab {

Grid Grid::line(double x0, double extent, int n, bool periodic) {
    Grid g;
    g.dim = 1;
    g.origin = {x0, 0.0};
    g.spacing = {extent / n, 1.0};
    g.counts = {n, 1};
    g.periodic = {periodic, false};
    g.validate();
    return g;
}

Grid Grid::square(double x0, double y0, double ex, double ey, int nx, int ny,
                  bool periodic) {
    Grid g;
    g.dim = 2;
    g.origin = {x0, y0};
    g.spacing = {ex / nx, ey / ny};
    g.counts = {nx, ny};
    g.periodic = {periodic, periodic};
    g.validate();
    return g;
}

void Grid::validate() const {
    if (dim != 1 && dim != 2) throw ParameterError("grid: dim must be 1 or 2");
    for (int a = 0; a < dim; ++a) {
        if (!(spacing[a] > 0.0)) throw ParameterError("grid: spacing must be positive");
        if (counts[a] < 8) throw ParameterError("grid: need at least 8 points per axis");
    }
}

bool Grid::same_layout(const Grid& o) const {
    if (dim != o.dim) return false;
    for (int a = 0; a < dim; ++a) {
        if (counts[a] != o.counts[a] || periodic[a] != o.periodic[a]) return false;
        if (origin[a] != o.origin[a] || spacing[a] != o.spacing[a]) return false;
    }
    return true;
}

double SampledField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

SampledField sample_scalar(const Grid& g, const std::function<double(const Vec&)>& f,
                           double time) {
    SampledField u;
    u.grid = g;
    u.components = 1;
    u.time = time;
    u.values.resize(g.num_points());
    const int64_t n = g.num_points();
    for (int64_t p = 0; p < n; ++p) u.values[p] = f(g.point(p));
    return u;
}

SampledField sample_vector(const Grid& g, const std::function<Vec(const Vec&)>& f,
                           double time) {
    SampledField u;
    u.grid = g;
    u.components = g.dim;
    u.time = time;
    u.values.resize(g.num_points() * g.dim);
    const int64_t n = g.num_points();
    for (int64_t p = 0; p < n; ++p) {
        const Vec v = f(g.point(p));
        for (int c = 0; c < g.dim; ++c) u.values[p * g.dim + c] = v[c];
    }
    return u;
}

InteriorWindow interior_window(const Grid& g, double margin) {
    InteriorWindow w;
    w.margin = margin;
    std::array<int, 2> lo{0, 0}, hi{g.counts[0] - 1, g.counts[1] - 1};
    for (int a = 0; a < g.dim; ++a) {
        if (g.periodic[a]) continue;
        // strictly more than `margin` away from the first/last node
        const int k = int(std::floor(margin / g.spacing[a])) + 1;
        lo[a] = k;
        hi[a] = g.counts[a] - 1 - k;
    }
    if (g.dim == 1) {
        for (int i = lo[0]; i <= hi[0]; ++i) w.indices.push_back(i);
    } else {
        for (int j = lo[1]; j <= hi[1]; ++j)
            for (int i = lo[0]; i <= hi[0]; ++i) w.indices.push_back(g.flat_index(i, j));
    }
    return w;
}

namespace {

struct AxisLocation {
    int i0;
    int i1;
    double f;
};

inline AxisLocation locate(const Grid& g, int axis, double x) {
    const double c = (x - g.origin[axis]) / g.spacing[axis] - 0.5;
    const int n = g.counts[axis];
    if (g.periodic[axis]) {
        double cw = std::fmod(c, double(n));
        if (cw < 0.0) cw += n;
        int i0 = int(cw);
        if (i0 >= n) i0 = n - 1;
        const double f = cw - i0;
        int i1 = i0 + 1;
        if (i1 == n) i1 = 0;
        return {i0, i1, f};
    }
    if (c < 0.0 || c > double(n - 1))
        throw std::domain_error("field evaluation outside the node hull of a non-periodic axis");
    int i0 = int(c);
    if (i0 >= n - 1) i0 = n - 2;
    return {i0, i0 + 1, c - i0};
}

}  // namespace

Vec eval_field(const SampledField& u, const Vec& x) {
    const Grid& g = u.grid;
    const int m = u.components;
    Vec out{0.0, 0.0};
    if (g.dim == 1) {
        const AxisLocation ax = locate(g, 0, x[0]);
        for (int c = 0; c < m; ++c) {
            const double v0 = u.values[int64_t(ax.i0) * m + c];
            const double v1 = u.values[int64_t(ax.i1) * m + c];
            out[c] = v0 + (v1 - v0) * ax.f;
        }
        return out;
    }
    const AxisLocation ax = locate(g, 0, x[0]);
    const AxisLocation ay = locate(g, 1, x[1]);
    const int64_t r0 = int64_t(ay.i0) * g.counts[0], r1 = int64_t(ay.i1) * g.counts[0];
    for (int c = 0; c < m; ++c) {
        const double v00 = u.values[(r0 + ax.i0) * m + c];
        const double v10 = u.values[(r0 + ax.i1) * m + c];
        const double v01 = u.values[(r1 + ax.i0) * m + c];
        const double v11 = u.values[(r1 + ax.i1) * m + c];
        const double b = v00 + (v10 - v00) * ax.f;
        const double t = v01 + (v11 - v01) * ax.f;
        out[c] = b + (t - b) * ay.f;
    }
    return out;
}

Vec increment(const SampledField& u, const Vec& x, double ell, const Vec& z) {
    Vec xp = x;
    for (int a = 0; a < u.grid.dim; ++a) xp[a] += ell * z[a];
    return sub(eval_field(u, xp), eval_field(u, x));
}

double divergence_residual(const SampledField& u, const TestFunction& phi) {
    const Grid& g = u.grid;
    if (u.components != g.dim)
        throw InputError("divergence_residual: u must be a vector field");
    const auto box = phi.support_box();
    for (int a = 0; a < g.dim; ++a) {
        if (g.periodic[a]) continue;
        if (box[0][a] <= g.node_lo(a) || box[1][a] >= g.node_hi(a))
            throw std::domain_error("divergence_residual: test function support touches the boundary");
    }
    const double vol = g.cell_volume();
    double s = 0.0;
    const int64_t n = g.num_points();
    for (int64_t p = 0; p < n; ++p) {
        const Vec x = g.point(p);
        const Vec grad = phi.gradient(x);
        s += dot(u.vector_value(p), grad, g.dim);
    }
    return s * vol;
}

double structure_norm(const SampledField& u, const Vec& h, StructureMode mode) {
    const Grid& g = u.grid;
    const double hn = norm(h, g.dim);
    const double dxmin = g.dim == 1 ? g.spacing[0] : std::min(g.spacing[0], g.spacing[1]);
    if (hn < dxmin) throw ResolutionError("structure_norm: |h| below grid spacing");
    const InteriorWindow win = interior_window(g, hn);
    const double vol = g.cell_volume();
    double s = 0.0;
    for (int64_t p : win.indices) {
        const Vec x = g.point(p);
        Vec xp = x;
        for (int a = 0; a < g.dim; ++a) xp[a] += h[a];
        const Vec d = sub(eval_field(u, xp), u.vector_value(p));
        if (mode == StructureMode::Absolute) {
            s += norm(d, std::max(u.components, 1));
        } else {
            s += std::abs(dot(h, d, g.dim));
        }
    }
    s *= vol;
    return mode == StructureMode::Absolute ? s / hn : s / (hn * hn);
}

// --- serialization -----------------------------------------------------------

namespace {
// %.17g round-trips IEEE doubles exactly and keeps output bytes deterministic
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_field_table(std::ostream& os, const SampledField& u) {
    const Grid& g = u.grid;
    os << "# fieldtable v1\n";
    os << "dim " << g.dim << "\n";
    os << "counts";
    for (int a = 0; a < g.dim; ++a) os << " " << g.counts[a];
    os << "\nspacing";
    for (int a = 0; a < g.dim; ++a) os << " " << fmt17(g.spacing[a]);
    os << "\norigin";
    for (int a = 0; a < g.dim; ++a) os << " " << fmt17(g.origin[a]);
    os << "\nperiodic";
    for (int a = 0; a < g.dim; ++a) os << " " << (g.periodic[a] ? 1 : 0);
    os << "\ncomponents " << u.components;
    os << "\ntime " << fmt17(u.time) << "\n";
    os << "# one row per grid point, axis-0 index fastest; columns = components\n";
    const int64_t n = g.num_points();
    for (int64_t p = 0; p < n; ++p) {
        for (int c = 0; c < u.components; ++c) {
            if (c) os << " ";
            os << fmt17(u.values[p * u.components + c]);
        }
        os << "\n";
    }
}

SampledField read_field_table(std::istream& is) {
    SampledField u;
    Grid g;
    std::string line;
    auto next_data_line = [&]() -> std::string {
        while (std::getline(is, line)) {
            if (!line.empty() && line[0] != '#') return line;
        }
        throw InputError("field table: truncated header");
    };
    auto expect = [&](const std::string& key) -> std::istringstream {
        std::istringstream ss(next_data_line());
        std::string k;
        ss >> k;
        if (k != key) throw InputError("field table: expected '" + key + "', got '" + k + "'");
        return ss;
    };
    {
        auto ss = expect("dim");
        ss >> g.dim;
    }
    {
        auto ss = expect("counts");
        for (int a = 0; a < g.dim; ++a) ss >> g.counts[a];
    }
    {
        auto ss = expect("spacing");
        for (int a = 0; a < g.dim; ++a) ss >> g.spacing[a];
    }
    {
        auto ss = expect("origin");
        for (int a = 0; a < g.dim; ++a) ss >> g.origin[a];
    }
    {
        auto ss = expect("periodic");
        for (int a = 0; a < g.dim; ++a) {
            int v;
            ss >> v;
            g.periodic[a] = v != 0;
        }
    }
    {
        auto ss = expect("components");
        ss >> u.components;
    }
    {
        auto ss = expect("time");
        ss >> u.time;
    }
    g.validate();
    u.grid = g;
    const int64_t n = g.num_points() * u.components;
    u.values.resize(n);
    int64_t k = 0;
    while (k < n) {
        std::istringstream ss(next_data_line());
        double v;
        while (k < n && (ss >> v)) u.values[k++] = v;
    }
    for (double v : u.values)
        if (!std::isfinite(v)) throw InputError("field table: non-finite value");
    return u;
}

}  // namespace fluxlab
