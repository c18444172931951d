#include "fluxlab/testfn.hpp"

#include <cmath>

namespace fluxlab {

double bump1d(double s) {
    const double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double bump1d_deriv(double s) {
    const double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    const double q = 1.0 - s2;
    return bump1d(s) * (-2.0 * s / (q * q));
}

namespace {

// max |b'(s)| over |s|<1, evaluated once on a fine lattice. The profile is
// fixed, so a numeric bound is fine and avoids hand-derived constants.
double bump_deriv_max() {
    static const double m = [] {
        double best = 0.0;
        for (int i = 0; i < 20001; ++i) {
            const double s = -1.0 + 2.0 * i / 20000.0;
            best = std::max(best, std::abs(bump1d_deriv(s)));
        }
        return best;
    }();
    return m;
}

double bump_max() { return 1.0; }  // b(0) = 1 with this normalization

}  // namespace

double TestFunction::operator()(const Vec& x) const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= bump1d((x[a] - center[a]) / radius[a]);
    if (coordinate_axis >= 0) v *= x[coordinate_axis] - center[coordinate_axis];
    return v;
}

Vec TestFunction::gradient(const Vec& x) const {
    std::array<double, 2> b{1.0, 1.0}, db{0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        const double s = (x[a] - center[a]) / radius[a];
        b[a] = bump1d(s);
        db[a] = bump1d_deriv(s) / radius[a];
    }
    Vec g{0.0, 0.0};
    if (dim == 1) {
        g[0] = db[0];
    } else {
        g[0] = db[0] * b[1];
        g[1] = b[0] * db[1];
    }
    if (coordinate_axis >= 0) {
        const double t = x[coordinate_axis] - center[coordinate_axis];
        const double base = dim == 1 ? b[0] : b[0] * b[1];
        for (int a = 0; a < dim; ++a) g[a] *= t;
        g[coordinate_axis] += base;
    }
    return g;
}

std::array<Vec, 2> TestFunction::support_box() const {
    Vec lo = center, hi = center;
    for (int a = 0; a < dim; ++a) {
        lo[a] -= radius[a];
        hi[a] += radius[a];
    }
    return {lo, hi};
}

TestFunction bump_test_function(int dim, const Vec& center, const Vec& radius) {
    TestFunction f;
    f.dim = dim;
    f.center = center;
    f.radius = radius;
    f.coordinate_axis = -1;
    double lip = 0.0;
    for (int a = 0; a < dim; ++a) lip = std::max(lip, bump_deriv_max() / radius[a]);
    f.lipschitz = lip;
    f.name = "bump";
    return f;
}

TestFunction coordinate_bump_test_function(int dim, int axis, const Vec& center,
                                           const Vec& radius) {
    TestFunction f = bump_test_function(dim, center, radius);
    f.coordinate_axis = axis;
    // |d/ds (s b(s))| <= b_max + |s||b'| <= 1 + max|b'|, scaled per axis
    f.lipschitz = 0.0;
    for (int a = 0; a < dim; ++a) {
        double la = bump_deriv_max() / radius[a] * radius[axis];
        if (a == axis) la = bump_max() + bump_deriv_max();
        f.lipschitz = std::max(f.lipschitz, la);
    }
    f.name = "coordinate_bump";
    return f;
}

double TimeProfile::mass() const {
    // composite midpoint on the support; the integrand is C^∞ with compact
    // support so this converges faster than any power of the panel count
    const int n = 2048;
    double s = 0.0;
    const double h = 2.0 * radius / n;
    for (int i = 0; i < n; ++i) {
        const double t = center - radius + (i + 0.5) * h;
        s += (*this)(t);
    }
    return s * h;
}

}  // namespace fluxlab
