#include "fluxlab/mollify.hpp"

#include <algorithm>
#include <cmath>

namespace fluxlab {

namespace {

void check_scale(const SampledField& u, double ell) {
    const Grid& g = u.grid;
    double dxmax = g.spacing[0];
    if (g.dim == 2) dxmax = std::max(dxmax, g.spacing[1]);
    if (ell < 4.0 * dxmax)
        throw ResolutionError("mollification scale below 4 grid spacings");
}

void check_window(const InteriorWindow& win, const Grid& g, double ell) {
    bool any_open = false;
    for (int a = 0; a < g.dim; ++a) any_open |= !g.periodic[a];
    if (any_open && win.margin < ell * (1.0 - 1e-12))
        throw PreconditionError("window margin smaller than the convolution radius");
}

// Per-node bilinear gather plan. On a uniform grid the fractional part of the
// shifted evaluation point is the same at every output node, so each kernel
// node contributes a fixed 4-point stencil (2-point in 1D).
struct Tap {
    int64_t rel = 0;          // value-array offset of the lower corner
    double c00 = 0, c10 = 0, c01 = 0, c11 = 0;  // stencil weights * coeff
    int qx = 0, qy = 0;       // integer shifts (periodic path)
    double fx = 0, fy = 0;    // fractional offsets (periodic path)
};

struct Plan {
    bool periodic = false;
    int dim = 2, comps = 1, nx = 0, ny = 0;
    std::vector<Tap> taps;
};

Plan make_plan(const Grid& g, int comps, const Kernel& k, double ell, double sign,
               const std::vector<double>& coeffs) {
    Plan p;
    p.dim = g.dim;
    p.comps = comps;
    p.nx = g.counts[0];
    p.ny = g.counts[1];
    p.periodic = g.periodic[0] || g.periodic[1];
    p.taps.resize(k.nodes.size());
    for (size_t i = 0; i < k.nodes.size(); ++i) {
        Tap t;
        const double sx = sign * ell * k.nodes[i][0] / g.spacing[0];
        const double qxf = std::floor(sx);
        t.qx = int(qxf);
        t.fx = sx - qxf;
        if (g.dim == 2) {
            const double sy = sign * ell * k.nodes[i][1] / g.spacing[1];
            const double qyf = std::floor(sy);
            t.qy = int(qyf);
            t.fy = sy - qyf;
        }
        const double c = coeffs[i];
        t.c00 = c * (1.0 - t.fx) * (1.0 - t.fy);
        t.c10 = c * t.fx * (1.0 - t.fy);
        t.c01 = c * (1.0 - t.fx) * t.fy;
        t.c11 = c * t.fx * t.fy;
        if (g.dim == 1) {
            t.c00 = c * (1.0 - t.fx);
            t.c10 = c * t.fx;
            t.c01 = t.c11 = 0.0;
        }
        t.rel = (int64_t(t.qx) + int64_t(p.nx) * t.qy) * comps;
        p.taps[i] = t;
    }
    return p;
}

inline int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

// accumulate one component over the window with a fixed plan
void run_plan(const Plan& p, const std::vector<double>& values, int comp,
              const std::vector<int64_t>& idx, double* out) {
    const double* V = values.data() + comp;
    const int64_t n = int64_t(idx.size());
    const int64_t sX = p.comps;
    const int64_t sY = int64_t(p.nx) * p.comps;
    if (!p.periodic) {
#pragma omp parallel for schedule(static)
        for (int64_t q = 0; q < n; ++q) {
            const int64_t base = idx[q] * p.comps;
            double acc = 0.0;
            for (const Tap& t : p.taps) {
                const double* b = V + base + t.rel;
                acc += t.c00 * b[0] + t.c10 * b[sX];
                if (p.dim == 2) acc += t.c01 * b[sY] + t.c11 * b[sY + sX];
            }
            out[q] = acc;
        }
        return;
    }
#pragma omp parallel for schedule(static)
    for (int64_t q = 0; q < n; ++q) {
        const int64_t flat = idx[q];
        const int ix = int(flat % p.nx);
        const int iy = int(flat / p.nx);
        double acc = 0.0;
        for (const Tap& t : p.taps) {
            const int x0 = wrap(ix + t.qx, p.nx);
            const int x1 = wrap(ix + t.qx + 1, p.nx);
            if (p.dim == 1) {
                acc += t.c00 * V[int64_t(x0) * sX] + t.c10 * V[int64_t(x1) * sX];
                continue;
            }
            const int y0 = wrap(iy + t.qy, p.ny);
            const int y1 = wrap(iy + t.qy + 1, p.ny);
            const int64_t r0 = int64_t(y0) * sY, r1 = int64_t(y1) * sY;
            acc += t.c00 * V[r0 + int64_t(x0) * sX] + t.c10 * V[r0 + int64_t(x1) * sX] +
                   t.c01 * V[r1 + int64_t(x0) * sX] + t.c11 * V[r1 + int64_t(x1) * sX];
        }
        out[q] = acc;
    }
}

std::vector<double> coeff_vector(const Kernel& k, double ell, KernelCoeff which) {
    std::vector<double> c(k.nodes.size());
    for (size_t i = 0; i < k.nodes.size(); ++i) {
        switch (which) {
            case KernelCoeff::Value: c[i] = k.weights[i] * k.values[i]; break;
            case KernelCoeff::DerivX: c[i] = k.weights[i] * k.gradients[i][0] / ell; break;
            case KernelCoeff::DerivY: c[i] = k.weights[i] * k.gradients[i][1] / ell; break;
        }
    }
    return c;
}

}  // namespace

std::vector<double> convolve_window(const SampledField& u, int comp, const Kernel& k,
                                    double ell, KernelCoeff which,
                                    const InteriorWindow& win) {
    check_scale(u, ell);
    check_window(win, u.grid, ell);
    const Plan p = make_plan(u.grid, u.components, k, ell, -1.0, coeff_vector(k, ell, which));
    std::vector<double> out(win.indices.size());
    run_plan(p, u.values, comp, win.indices, out.data());
    return out;
}

std::vector<double> increment_flux_window(const SampledField& u, const Kernel& k,
                                          double ell, double prefactor,
                                          const InteriorWindow& win) {
    check_scale(u, ell);
    check_window(win, u.grid, ell);
    const Grid& g = u.grid;
    const int m = u.components;
    // taps evaluated at x + ℓz
    std::vector<double> unit(k.nodes.size(), 1.0);
    const Plan p = make_plan(g, m, k, ell, +1.0, unit);
    const double pref = prefactor / ell;
    std::vector<double> out(win.indices.size());
    const double* V = u.values.data();
    const int64_t sX = m;
    const int64_t sY = int64_t(p.nx) * m;
    const int64_t n = int64_t(win.indices.size());
#pragma omp parallel for schedule(static)
    for (int64_t q = 0; q < n; ++q) {
        const int64_t flat = win.indices[q];
        const int64_t base = flat * m;
        double acc = 0.0;
        for (size_t i = 0; i < p.taps.size(); ++i) {
            const Tap& t = p.taps[i];
            Vec d{0.0, 0.0};
            if (!p.periodic) {
                const double* b = V + base + t.rel;
                for (int c = 0; c < m; ++c) {
                    double v = t.c00 * b[c] + t.c10 * b[sX + c];
                    if (g.dim == 2) v += t.c01 * b[sY + c] + t.c11 * b[sY + sX + c];
                    d[c] = v - V[base + c];
                }
            } else {
                const int ix = int(flat % p.nx);
                const int iy = int(flat / p.nx);
                const int x0 = wrap(ix + t.qx, p.nx);
                const int x1 = wrap(ix + t.qx + 1, p.nx);
                const int y0 = g.dim == 2 ? wrap(iy + t.qy, p.ny) : 0;
                const int y1 = g.dim == 2 ? wrap(iy + t.qy + 1, p.ny) : 0;
                for (int c = 0; c < m; ++c) {
                    double v;
                    if (g.dim == 1) {
                        v = t.c00 * V[int64_t(x0) * sX + c] + t.c10 * V[int64_t(x1) * sX + c];
                    } else {
                        const int64_t r0 = int64_t(y0) * sY, r1 = int64_t(y1) * sY;
                        v = t.c00 * V[r0 + int64_t(x0) * sX + c] +
                            t.c10 * V[r0 + int64_t(x1) * sX + c] +
                            t.c01 * V[r1 + int64_t(x0) * sX + c] +
                            t.c11 * V[r1 + int64_t(x1) * sX + c];
                    }
                    d[c] = v - V[base + c];
                }
            }
            const double dn2 = d[0] * d[0] + d[1] * d[1];
            acc += k.weights[i] * dot(k.gradients[i], d, g.dim) * dn2;
        }
        out[q] = pref * acc;
    }
    return out;
}

WindowedField mollify(const SampledField& u, const Kernel& k, double ell) {
    check_scale(u, ell);
    WindowedField w;
    w.window = interior_window(u.grid, ell);
    w.field.grid = u.grid;
    w.field.components = u.components;
    w.field.time = u.time;
    w.field.values.assign(u.values.size(), 0.0);
    for (int c = 0; c < u.components; ++c) {
        const std::vector<double> v =
            convolve_window(u, c, k, ell, KernelCoeff::Value, w.window);
        for (size_t q = 0; q < w.window.indices.size(); ++q)
            w.field.values[w.window.indices[q] * u.components + c] = v[q];
    }
    return w;
}

Vec mollify_at(const SampledField& u, const Kernel& k, double ell, const Vec& x) {
    Vec acc{0.0, 0.0};
    for (size_t i = 0; i < k.nodes.size(); ++i) {
        Vec xp = x;
        for (int a = 0; a < u.grid.dim; ++a) xp[a] -= ell * k.nodes[i][a];
        const Vec v = eval_field(u, xp);
        const double c = k.weights[i] * k.values[i];
        acc[0] += c * v[0];
        acc[1] += c * v[1];
    }
    return acc;
}

Vec mollify_fn_at(const std::function<Vec(const Vec&)>& f, const Kernel& k, double ell,
                  const Vec& x) {
    Vec acc{0.0, 0.0};
    for (size_t i = 0; i < k.nodes.size(); ++i) {
        const Vec xp = sub(x, scale(k.nodes[i], ell));
        const Vec v = f(xp);
        const double c = k.weights[i] * k.values[i];
        acc[0] += c * v[0];
        acc[1] += c * v[1];
    }
    return acc;
}

double commutator_norm(const TestFunction& phi, const SampledField& u, const Kernel& k,
                       double ell) {
    check_scale(u, ell);
    const Grid& g = u.grid;
    const WindowedField ul = mollify(u, k, ell);
    // φ·u_ℓ as a sampled field (valid on the margin-ℓ window)
    SampledField phiul = ul.field;
    const int64_t n = g.num_points();
    for (int64_t p = 0; p < n; ++p) {
        const double f = phi(g.point(p));
        for (int c = 0; c < u.components; ++c) phiul.values[p * u.components + c] *= f;
    }
    const InteriorWindow win2 = interior_window(g, 2.0 * ell);
    double best = 0.0;
    for (int c = 0; c < u.components; ++c) {
        const std::vector<double> a =
            convolve_window(phiul, c, k, ell, KernelCoeff::Value, win2);
        const std::vector<double> b =
            convolve_window(ul.field, c, k, ell, KernelCoeff::Value, win2);
        for (size_t q = 0; q < win2.indices.size(); ++q) {
            const double f = phi(g.point(win2.indices[q]));
            best = std::max(best, std::abs(a[q] - f * b[q]));
        }
    }
    return best;
}

double pair_with_test_function(const std::vector<double>& field_on_window,
                               const InteriorWindow& win, const Grid& g,
                               const TestFunction& phi) {
    double s = 0.0;
    for (size_t q = 0; q < win.indices.size(); ++q) {
        const double f = phi(g.point(win.indices[q]));
        if (f != 0.0) s += field_on_window[q] * f;
    }
    return s * g.cell_volume();
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace fluxlab
