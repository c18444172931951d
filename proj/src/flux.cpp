#include "fluxlab/flux.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace fluxlab {

namespace {

SampledField product_field(const SampledField& u, int a, int b) {
    SampledField p;
    p.grid = u.grid;
    p.components = 1;
    p.time = u.time;
    const int64_t n = u.grid.num_points();
    p.values.resize(n);
    const int m = u.components;
    for (int64_t q = 0; q < n; ++q)
        p.values[q] = u.values[q * m + a] * u.values[q * m + b];
    return p;
}

WindowedField make_windowed(const Grid& g, const InteriorWindow& win,
                            const std::vector<double>& on_window) {
    WindowedField w;
    w.window = win;
    w.field.grid = g;
    w.field.components = 1;
    w.field.values.assign(g.num_points(), 0.0);
    for (size_t q = 0; q < win.indices.size(); ++q)
        w.field.values[win.indices[q]] = on_window[q];
    return w;
}

}  // namespace

ReynoldsStress reynolds_stress(const SampledField& u, const Kernel& k, double ell) {
    if (u.components != u.grid.dim)
        throw InputError("reynolds_stress: u must be a vector field");
    const Grid& g = u.grid;
    ReynoldsStress r;
    r.grid = g;
    r.ell = ell;
    r.window = interior_window(g, 2.0 * ell);
    const int d = g.dim;

    std::vector<std::vector<double>> ul(d);
    for (int c = 0; c < d; ++c)
        ul[c] = convolve_window(u, c, k, ell, KernelCoeff::Value, r.window);

    auto moll_product = [&](int a, int b) {
        const SampledField p = product_field(u, a, b);
        return convolve_window(p, 0, k, ell, KernelCoeff::Value, r.window);
    };
    r.xx = moll_product(0, 0);
    for (size_t q = 0; q < r.xx.size(); ++q) r.xx[q] -= ul[0][q] * ul[0][q];
    if (d == 2) {
        r.xy = moll_product(0, 1);
        r.yy = moll_product(1, 1);
        for (size_t q = 0; q < r.xy.size(); ++q) {
            r.xy[q] -= ul[0][q] * ul[1][q];
            r.yy[q] -= ul[1][q] * ul[1][q];
        }
    }
    return r;
}

WindowedField cet_flux(const SampledField& u, const Kernel& k, double ell) {
    const Grid& g = u.grid;
    const ReynoldsStress r = reynolds_stress(u, k, ell);
    const int d = g.dim;
    std::vector<double> D(r.window.indices.size(), 0.0);
    if (d == 1) {
        const std::vector<double> du =
            convolve_window(u, 0, k, ell, KernelCoeff::DerivX, r.window);
        for (size_t q = 0; q < D.size(); ++q) D[q] = r.xx[q] * du[q];
    } else {
        const std::vector<double> d1u1 =
            convolve_window(u, 0, k, ell, KernelCoeff::DerivX, r.window);
        const std::vector<double> d2u1 =
            convolve_window(u, 0, k, ell, KernelCoeff::DerivY, r.window);
        const std::vector<double> d1u2 =
            convolve_window(u, 1, k, ell, KernelCoeff::DerivX, r.window);
        const std::vector<double> d2u2 =
            convolve_window(u, 1, k, ell, KernelCoeff::DerivY, r.window);
        for (size_t q = 0; q < D.size(); ++q)
            D[q] = r.xx[q] * d1u1[q] + r.xy[q] * (d2u1[q] + d1u2[q]) + r.yy[q] * d2u2[q];
    }
    return make_windowed(g, r.window, D);
}

WindowedField dr_flux(const SampledField& u, const Kernel& k, double ell) {
    const Grid& g = u.grid;
    const InteriorWindow win = interior_window(g, 2.0 * ell);
    const bool scalar = u.components == 1;
    // Vector fields: the quartic-kernel estimator, prefactor 1/4. Scalar
    // (Burgers) fields: cubic-flux defect estimator, prefactor -1/12, so the
    // pairing limit matches the energy-balance side of the shock identity.
    const double pref = scalar ? -1.0 / 12.0 : 0.25;
    const std::vector<double> D = increment_flux_window(u, k, ell, pref, win);
    return make_windowed(g, win, D);
}

double bd_flux_pair(const SampledField& u, const Kernel& k, double ell,
                    const TestFunction& phi) {
    if (!k.radial) throw PreconditionError("bd_flux_pair: kernel must be radial");
    if (u.grid.dim != 2 || u.components != 2)
        throw PreconditionError("bd_flux_pair: u must be a 2D vector field");
    const Grid& g = u.grid;

    const ReynoldsStress r = reynolds_stress(u, k, ell);
    SampledField Rxx = make_windowed(g, r.window, r.xx).field;
    SampledField Rxy = make_windowed(g, r.window, r.xy).field;
    SampledField Ryy = make_windowed(g, r.window, r.yy).field;

    // evaluation points: margin-2ℓ window restricted to supp φ
    const auto box = phi.support_box();
    InteriorWindow eval;
    eval.margin = r.window.margin;
    for (int64_t p : r.window.indices) {
        const Vec x = g.point(p);
        bool in = true;
        for (int a = 0; a < 2; ++a) in = in && x[a] > box[0][a] && x[a] < box[1][a];
        if (in) eval.indices.push_back(p);
    }
    if (eval.indices.empty()) return 0.0;

    auto conv = [&](const SampledField& s, KernelCoeff which) {
        return convolve_window(s, 0, k, ell, which, eval);
    };
    const std::vector<double> Txx = conv(Rxx, KernelCoeff::Value);
    const std::vector<double> Txy = conv(Rxy, KernelCoeff::Value);
    const std::vector<double> Tyy = conv(Ryy, KernelCoeff::Value);
    const std::vector<double> dxTxx = conv(Rxx, KernelCoeff::DerivX);
    const std::vector<double> dyTxy = conv(Rxy, KernelCoeff::DerivY);
    const std::vector<double> dxTxy = conv(Rxy, KernelCoeff::DerivX);
    const std::vector<double> dyTyy = conv(Ryy, KernelCoeff::DerivY);

    double s = 0.0;
    for (size_t q = 0; q < eval.indices.size(); ++q) {
        const int64_t p = eval.indices[q];
        const Vec x = g.point(p);
        const double f = phi(x);
        const Vec gf = phi.gradient(x);
        const double div0 = gf[0] * Txx[q] + gf[1] * Txy[q] + f * (dxTxx[q] + dyTxy[q]);
        const double div1 = gf[0] * Txy[q] + gf[1] * Tyy[q] + f * (dxTxy[q] + dyTyy[q]);
        const Vec uv = u.vector_value(p);
        s += uv[0] * div0 + uv[1] * div1;
    }
    return -s * g.cell_volume();
}

namespace {

// shared spatial part of the energy balance: -∫ F_ℓ·∇φ + f_ℓ·u_ℓ φ dx over
// the margin-2ℓ window, with F = u(|u|²/2 + p) or u³/3 in Burgers mode
double energy_space_residual(const SampledField& u, const std::optional<SampledField>& p,
                             const std::optional<SampledField>& f, bool burgers,
                             const TestFunction& phi, const Kernel& k, double ell) {
    const Grid& g = u.grid;
    if (!burgers && !p)
        throw InputError("energy_balance_residual: missing pressure on an Euler scenario");
    const InteriorWindow win = interior_window(g, 2.0 * ell);
    const int d = g.dim;

    std::vector<std::vector<double>> ul(d);
    for (int c = 0; c < d; ++c) ul[c] = convolve_window(u, c, k, ell, KernelCoeff::Value, win);
    std::vector<double> pl;
    if (!burgers) pl = convolve_window(*p, 0, k, ell, KernelCoeff::Value, win);
    std::vector<std::vector<double>> fl(d);
    if (f)
        for (int c = 0; c < d; ++c)
            fl[c] = convolve_window(*f, c, k, ell, KernelCoeff::Value, win);

    double s = 0.0;
    for (size_t q = 0; q < win.indices.size(); ++q) {
        const Vec x = g.point(win.indices[q]);
        const Vec gphi = phi.gradient(x);
        double term = 0.0;
        if (burgers) {
            const double v = ul[0][q];
            term -= (v * v * v / 3.0) * gphi[0];
        } else {
            double e = 0.0;
            for (int c = 0; c < d; ++c) e += ul[c][q] * ul[c][q];
            e = 0.5 * e + pl[q];
            for (int c = 0; c < d; ++c) term -= ul[c][q] * e * gphi[c];
        }
        if (f) {
            double fu = 0.0;
            for (int c = 0; c < d; ++c) fu += fl[c][q] * ul[c][q];
            term -= fu * phi(x);
        }
        s += term;
    }
    return s * g.cell_volume();
}

}  // namespace

double energy_balance_residual(const EulerFields& in, const SpaceTimeTestFunction& phi,
                               const Kernel& k, double ell) {
    // stationary slice with a separable test function: the ∂_t pairing factors
    // into ∫φ_t' dt = 0 and drops
    const double space = energy_space_residual(in.u, in.p, in.f, in.burgers, phi.space, k, ell);
    return phi.time.mass() * space;
}

double energy_balance_density(const SampledField& u_minus, const SampledField& u_plus,
                              double dt, const std::optional<SampledField>& p_mid,
                              const std::optional<SampledField>& f_mid, bool burgers,
                              const SpaceTimeTestFunction& phi, double t_mid,
                              const Kernel& k, double ell) {
    if (!u_minus.grid.same_layout(u_plus.grid))
        throw InputError("energy_balance_density: slice grids differ");
    const Grid& g = u_minus.grid;
    const InteriorWindow win = interior_window(g, 2.0 * ell);
    const int d = g.dim;

    std::vector<std::vector<double>> ulm(d), ulp(d);
    for (int c = 0; c < d; ++c) {
        ulm[c] = convolve_window(u_minus, c, k, ell, KernelCoeff::Value, win);
        ulp[c] = convolve_window(u_plus, c, k, ell, KernelCoeff::Value, win);
    }
    const double phit = phi.time(t_mid);
    double ddt = 0.0;
    for (size_t q = 0; q < win.indices.size(); ++q) {
        double em = 0.0, ep = 0.0;
        for (int c = 0; c < d; ++c) {
            em += ulm[c][q] * ulm[c][q];
            ep += ulp[c][q] * ulp[c][q];
        }
        ddt += 0.5 * (ep - em) / (2.0 * dt) * phi.space(g.point(win.indices[q]));
    }
    ddt *= g.cell_volume() * phit;

    // mid-time spatial terms from the slice average
    SampledField umid = u_minus;
    for (size_t i = 0; i < umid.values.size(); ++i)
        umid.values[i] = 0.5 * (u_minus.values[i] + u_plus.values[i]);
    const double space =
        energy_space_residual(umid, p_mid, f_mid, burgers, phi.space, k, ell);
    return ddt + space * phit;
}

double vorticity_form_residual(const SampledField& u, const Kernel& k, double ell,
                               const TestFunction& phi) {
    if (!k.half_support)
        throw PreconditionError("vorticity_form_residual: kernel must have half support");
    if (u.grid.dim != 2 || u.components != 2)
        throw PreconditionError("vorticity_form_residual: u must be a 2D vector field");
    const Grid& g = u.grid;
    const InteriorWindow win = interior_window(g, 2.0 * ell);
    const std::vector<double> u1 = convolve_window(u, 0, k, ell, KernelCoeff::Value, win);
    const std::vector<double> u2 = convolve_window(u, 1, k, ell, KernelCoeff::Value, win);
    const std::vector<double> d2u1 = convolve_window(u, 0, k, ell, KernelCoeff::DerivY, win);
    const std::vector<double> d1u2 = convolve_window(u, 1, k, ell, KernelCoeff::DerivX, win);
    double s = 0.0;
    for (size_t q = 0; q < win.indices.size(); ++q) {
        // Λ₁₂ = ∂₂u₁ − ∂₁u₂ = −Λ₂₁ exactly in floating point
        const double l12 = d2u1[q] - d1u2[q];
        const double l21 = d1u2[q] - d2u1[q];
        const double t12 = u1[q] * u2[q];
        const double t21 = u2[q] * u1[q];
        const double contraction = l12 * t12 + l21 * t21;
        s += contraction * phi(g.point(win.indices[q]));
    }
    return s * g.cell_volume();
}

// --- scans -------------------------------------------------------------------

std::string flux_kind_name(FluxKind k) {
    switch (k) {
        case FluxKind::Cet: return "cet";
        case FluxKind::Dr: return "dr";
        case FluxKind::Bd: return "bd";
        case FluxKind::Energy: return "energy";
    }
    return "?";
}

double fit_loglog_exponent(const std::vector<double>& ells, const std::vector<double>& v) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) < 1e-300) return std::numeric_limits<double>::quiet_NaN();
        const double x = std::log(ells[i]), y = std::log(std::abs(v[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

double richardson_order(const std::vector<double>& v) {
    std::vector<double> orders;
    for (size_t i = 0; i + 2 < v.size(); ++i) {
        const double d0 = v[i + 1] - v[i];
        const double d1 = v[i + 2] - v[i + 1];
        if (d1 == 0.0 || d0 / d1 <= 0.0) continue;
        orders.push_back(std::log2(d0 / d1));
    }
    if (orders.empty()) return 1.0;  // declared first-order fallback
    std::sort(orders.begin(), orders.end());
    const double med = orders[orders.size() / 2];
    return std::clamp(med, 0.5, 3.0);
}

double richardson_limit(const std::vector<double>& v, double order) {
    const size_t n = v.size();
    if (n < 2) return v.empty() ? 0.0 : v.back();
    return v[n - 1] + (v[n - 1] - v[n - 2]) / (std::pow(2.0, order) - 1.0);
}

FluxScan flux_scan(const FluxScanInputs& in, const Kernel& k, FluxKind kind,
                   const std::vector<double>& ladder, const TestFunction& phi,
                   const TimeProfile* time_profile) {
    const Grid& g = in.u.grid;
    if (ladder.size() < 2) throw ResolutionError("flux_scan: ladder too short");
    double dxmax = g.spacing[0];
    if (g.dim == 2) dxmax = std::max(dxmax, g.spacing[1]);
    for (size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i] < 4.0 * dxmax)
            throw ResolutionError("flux_scan: ladder reaches below 4 grid spacings");
        if (i > 0 && std::abs(ladder[i - 1] / ladder[i] - 2.0) > 1e-9)
            throw ResolutionError("flux_scan: ladder must be geometric with ratio 2");
    }
    // φ must fit inside the interior window at the largest scanned scale
    const auto box = phi.support_box();
    for (int a = 0; a < g.dim; ++a) {
        if (g.periodic[a]) continue;
        const double margin = 2.0 * ladder.front();
        if (box[0][a] <= g.node_lo(a) + margin || box[1][a] >= g.node_hi(a) - margin)
            throw PreconditionError(
                "flux_scan: test function not supported inside the interior window at max scale");
    }

    FluxScan scan;
    scan.kind = flux_kind_name(kind);
    scan.scenario_id = in.scenario_id;
    scan.kernel_id = k.id;
    const double tmass = time_profile ? time_profile->mass() : 1.0;

    for (double ell : ladder) {
        double pairing = 0.0, sup = 0.0;
        switch (kind) {
            case FluxKind::Cet: {
                const WindowedField D = cet_flux(in.u, k, ell);
                std::vector<double> on(D.window.indices.size());
                for (size_t q = 0; q < on.size(); ++q)
                    on[q] = D.field.values[D.window.indices[q]];
                pairing = pair_with_test_function(on, D.window, g, phi) * tmass;
                sup = sup_abs(on);
                break;
            }
            case FluxKind::Dr: {
                const WindowedField D = dr_flux(in.u, k, ell);
                std::vector<double> on(D.window.indices.size());
                for (size_t q = 0; q < on.size(); ++q)
                    on[q] = D.field.values[D.window.indices[q]];
                pairing = pair_with_test_function(on, D.window, g, phi) * tmass;
                sup = sup_abs(on);
                break;
            }
            case FluxKind::Bd: {
                pairing = bd_flux_pair(in.u, k, ell, phi) * tmass;
                sup = std::abs(pairing);
                break;
            }
            case FluxKind::Energy: {
                SpaceTimeTestFunction st;
                st.space = phi;
                st.time = time_profile ? *time_profile : TimeProfile{0.0, 1.0};
                EulerFields ef{in.u, in.p, in.f, in.burgers};
                pairing = energy_balance_residual(ef, st, k, ell);
                sup = std::abs(pairing);
                break;
            }
        }
        scan.ells.push_back(ell);
        scan.pairings.push_back(pairing);
        scan.sup_stats.push_back(sup);
    }
    scan.sup_exponent = fit_loglog_exponent(scan.ells, scan.sup_stats);
    scan.pairing_order = richardson_order(scan.pairings);
    scan.extrapolated = richardson_limit(scan.pairings, scan.pairing_order);
    return scan;
}

void write_scan_csv(std::ostream& os, const std::vector<FluxScan>& scans) {
    os << "# fluxscan schema v1\n";
    os << "# fit_exponent: least-squares log-log decay exponent of sup_stat over the "
          "ladder (repeated on every row of its scan; empty when a sup vanishes)\n";
    os << "kind,scenario,kernel,ell,pairing,sup_stat,fit_exponent\n";
    char buf[256];
    for (const FluxScan& s : scans) {
        for (size_t i = 0; i < s.ells.size(); ++i) {
            os << s.kind << "," << s.scenario_id << "," << s.kernel_id << ",";
            if (std::isnan(s.sup_exponent)) {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,\n", s.ells[i],
                              s.pairings[i], s.sup_stats[i]);
            } else {
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.ells[i],
                              s.pairings[i], s.sup_stats[i], s.sup_exponent);
            }
            os << buf;
        }
    }
}

}  // namespace fluxlab
