/// @file acceptance.cpp
/// @brief End-to-end acceptance suite. Each criterion prints one PASS/FAIL
/// line with its measured values; the exit code is the number of failures.
/// Run with a criterion number (1..8) or no argument for the full suite.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "fluxlab/experiment.hpp"
#include "fluxlab/kernel_opt.hpp"
#include "oracles.hpp"

using namespace fluxlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::vector<double> window_values(const WindowedField& w) {
    std::vector<double> v(w.window.indices.size());
    for (size_t q = 0; q < v.size(); ++q) v[q] = w.field.value(w.window.indices[q]);
    return v;
}

// pairing of a flux kind over the φ-support subset of the interior window
double pairing_on_support(const SampledField& u, const Kernel& k, FluxKind kind, double ell,
                          const TestFunction& phi) {
    const Grid& g = u.grid;
    const InteriorWindow full = interior_window(g, 2.0 * ell);
    const auto box = phi.support_box();
    InteriorWindow eval;
    eval.margin = full.margin;
    for (int64_t p : full.indices) {
        const Vec x = g.point(p);
        bool in = true;
        for (int a = 0; a < g.dim; ++a) in = in && x[a] > box[0][a] && x[a] < box[1][a];
        if (in) eval.indices.push_back(p);
    }
    std::vector<double> D;
    if (kind == FluxKind::Dr) {
        const double pref = u.components == 1 ? -1.0 / 12.0 : 0.25;
        D = increment_flux_window(u, k, ell, pref, eval);
    } else {
        // cet on the subset: stress and gradients evaluated only where φ lives
        std::vector<std::vector<double>> ul(2), pr(3);
        for (int c = 0; c < 2; ++c)
            ul[c] = convolve_window(u, c, k, ell, KernelCoeff::Value, eval);
        int t = 0;
        for (int a = 0; a < 2; ++a)
            for (int b = a; b < 2; ++b) {
                SampledField prod;
                prod.grid = g;
                prod.components = 1;
                prod.values.resize(g.num_points());
                for (int64_t q = 0; q < g.num_points(); ++q)
                    prod.values[q] = u.values[q * 2 + a] * u.values[q * 2 + b];
                pr[t++] = convolve_window(prod, 0, k, ell, KernelCoeff::Value, eval);
            }
        const auto d1u1 = convolve_window(u, 0, k, ell, KernelCoeff::DerivX, eval);
        const auto d2u1 = convolve_window(u, 0, k, ell, KernelCoeff::DerivY, eval);
        const auto d1u2 = convolve_window(u, 1, k, ell, KernelCoeff::DerivX, eval);
        const auto d2u2 = convolve_window(u, 1, k, ell, KernelCoeff::DerivY, eval);
        D.resize(eval.indices.size());
        for (size_t q = 0; q < D.size(); ++q) {
            const double rxx = pr[0][q] - ul[0][q] * ul[0][q];
            const double rxy = pr[1][q] - ul[0][q] * ul[1][q];
            const double ryy = pr[2][q] - ul[1][q] * ul[1][q];
            D[q] = rxx * d1u1[q] + rxy * (d2u1[q] + d1u2[q]) + ryy * d2u2[q];
        }
    }
    return pair_with_test_function(D, eval, g, phi);
}

// ---------------------------------------------------------------------------
Outcome criterion1() {
    const Scenario& s = find_scenario("flat_shear");
    const Grid g = scenario_grid(s, 512);
    const SampledField u = sample_velocity(s, g, 0.0);
    const Kernel k = build_kernel(KernelProfile::standard_bump(), 2, 17);
    const std::vector<double> ladder{0.25, 0.125, 0.0625, 0.03125};

    double worst = 0.0;
    for (double ell : ladder) {
        worst = std::max(worst, sup_abs(window_values(cet_flux(u, k, ell))));
        worst = std::max(worst, sup_abs(window_values(dr_flux(u, k, ell))));
    }

    const Kernel half = build_kernel(KernelProfile::standard_bump(true), 2, 17);
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> off(-0.2, 0.2), rad(0.2, 0.5);
    double worst_vort = 0.0;
    for (const std::string& id :
         {std::string("flat_shear"), std::string("sawtooth_shear"),
          std::string("circular_vortex_sheet"), std::string("taylor_green")}) {
        const Scenario& sc = find_scenario(id);
        const Grid gg = scenario_grid(sc, 256);
        const SampledField uu = sample_velocity(sc, gg, 0.0);
        const double hx = 0.5 * sc.domain_extent[0];
        const Vec c{sc.domain_origin[0] + hx, sc.domain_origin[1] + hx};
        for (int t = 0; t < 10; ++t) {
            const TestFunction phi = bump_test_function(
                2, vec2(c[0] + off(rng) * hx, c[1] + off(rng) * hx),
                vec2(rad(rng) * hx, rad(rng) * hx));
            const double ell = 8.0 * std::max(gg.spacing[0], gg.spacing[1]);
            worst_vort = std::max(worst_vort, std::abs(vorticity_form_residual(uu, half, ell, phi)));
        }
    }

    Outcome o;
    o.pass = worst < 1e-12 && worst_vort < 1e-12;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "max|cet,dr| on flat_shear = %.2e (tol 1e-12), max vorticity-form residual "
                  "= %.2e (tol 1e-12)",
                  worst, worst_vort);
    o.detail = buf;
    return o;
}

// ---------------------------------------------------------------------------
Outcome criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario& s = find_scenario("circular_vortex_sheet");
    const Grid g = scenario_grid(s, 512);
    const SampledField u = sample_velocity(s, g, 0.0);
    const Kernel k = build_kernel(KernelProfile::standard_bump(), 2, 17);
    const std::vector<double> ladder{0.5, 0.25, 0.125, 0.0625, 0.03125};
    const TestFunction phi = bump_test_function(2, vec2(0.6, 0.8), vec2(0.18, 0.18));

    std::vector<double> cet, bd;
    for (double ell : ladder) {
        cet.push_back(pairing_on_support(u, k, FluxKind::Cet, ell, phi));
        bd.push_back(bd_flux_pair(u, k, ell, phi));
    }
    auto monotone = [](const std::vector<double>& v) {
        for (size_t i = 0; i + 1 < v.size(); ++i)
            if (!(std::abs(v[i + 1]) < std::abs(v[i]))) return false;
        return true;
    };
    const double cet_lim = richardson_limit(cet, richardson_order(cet));
    const double bd_lim = richardson_limit(bd, richardson_order(bd));
    const bool cet_ok = monotone(cet) && std::abs(cet_lim) < 0.02 * std::abs(cet.front());
    const bool bd_ok = monotone(bd) && std::abs(bd_lim) < 0.02 * std::abs(bd.front());
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Outcome o;
    o.pass = cet_ok && bd_ok && secs < 120.0;
    std::string seq = "cet pairings:";
    char buf[128];
    for (double v : cet) {
        std::snprintf(buf, sizeof buf, " %.3e", v);
        seq += buf;
    }
    seq += "; bd pairings:";
    for (double v : bd) {
        std::snprintf(buf, sizeof buf, " %.3e", v);
        seq += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "; extrapolated cet %.2e bd %.2e; monotone %s/%s; %.0f s",
                  cet_lim, bd_lim, monotone(cet) ? "yes" : "no", monotone(bd) ? "yes" : "no",
                  secs);
    o.detail = seq + buf;
    return o;
}

// ---------------------------------------------------------------------------
Outcome criterion3() {
    const Scenario& s = find_scenario("burgers_stationary_shock");
    const Grid g = scenario_grid(s, 4096);
    const Kernel k = build_kernel(KernelProfile::standard_bump(), 1, 65);
    FluxScanInputs in;
    in.u = sample_velocity(s, g, 0.0);
    in.burgers = true;
    in.scenario_id = s.id;
    const TestFunction phi = bump_test_function(1, vec1(0.0), vec1(0.5));
    const TimeProfile tp{0.0, 0.4};
    const FluxScan scan =
        flux_scan(in, k, FluxKind::Dr, {0.5, 0.25, 0.125, 0.0625}, phi, &tp);
    const double expected = -(2.0 / 3.0) * phi(vec1(0.0)) * tp.mass();
    const double rel = std::abs(scan.extrapolated - expected) / std::abs(expected);

    // exact rational path
    const SignedMeasure1D defect = burgers_entropy_defect(*s.truth.shock);
    const bool exact_ok =
        defect.atoms.size() == 1 && defect.atoms[0].second == Rational(-2, 3);

    // moving shock rate via the independent weak-form oracle
    const Scenario& ms = find_scenario("burgers_moving_shock");
    SpaceTimeTestFunction st;
    st.space = bump_test_function(1, vec1(0.0), vec1(0.6));
    st.time = tp;
    const double wr = burgers_weak_residual(*ms.truth.shock, st);
    const double along = oracle::integrate(
        [&](double t) { return st.space(vec1(0.5 * t)) * st.time(t); }, -0.4, 0.4, 4096);
    const double rate = wr / along;
    const bool moving_ok = std::abs(rate - (-1.0 / 12.0)) < 1e-6;

    Outcome o;
    o.pass = rel < 0.02 && exact_ok && moving_ok;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "dr extrapolated %.6f vs %.6f (rel %.2e, tol 2e-2); defect atom %s; moving "
                  "rate %.10f vs -1/12 (tol 1e-6)",
                  scan.extrapolated, expected, rel, exact_ok ? "-2/3 exact" : "WRONG", rate);
    o.detail = buf;
    return o;
}

// ---------------------------------------------------------------------------
Outcome criterion4() {
    std::vector<PiecewiseBV> suite;
    {
        PiecewiseBV u;
        u.lo = -1; u.hi = 1; u.breakpoints = {0};
        u.pieces = {Polynomial{{0}}, Polynomial{{1}}};
        suite.push_back(u);  // heaviside
        u.pieces = {Polynomial{{-1}}, Polynomial{{1}}};
        suite.push_back(u);  // sign
        u.pieces = {Polynomial{{0, -1}}, Polynomial{{0, 1}}};
        suite.push_back(u);  // |x|
        u.pieces = {Polynomial{{0, 0, 1}}, Polynomial{{1, 0, 1}}};
        suite.push_back(u);  // H + x²
    }
    {
        PiecewiseBV u;
        u.lo = -2; u.hi = 2; u.breakpoints = {-1, Rational(1, 2)};
        u.pieces = {Polynomial{{1, Rational(1, 2)}}, Polynomial{{-1, 1}},
                    Polynomial{{2, 0, Rational(-1, 3)}}};
        suite.push_back(u);
    }
    {
        PiecewiseBV u;
        u.lo = -1; u.hi = 1; u.breakpoints = {Rational(1, 3)};
        u.pieces = {Polynomial{{0, 0, 0, 1}}, Polynomial{{Rational(-1, 2), 2}}};
        suite.push_back(u);
    }
    {
        PiecewiseBV u;
        u.lo = -1; u.hi = 1; u.breakpoints = {Rational(-1, 2), 0, Rational(1, 2)};
        u.pieces = {Polynomial{{Rational(3, 4), 1}}, Polynomial{{Rational(1, 4), 1}},
                    Polynomial{{Rational(-1, 4), 1}}, Polynomial{{Rational(-3, 4), 1}}};
        suite.push_back(u);
    }

    bool all_zero = suite.size() >= 6;
    for (const PiecewiseBV& u : suite) {
        for (ChainRuleIdentity id :
             {ChainRuleIdentity::Cr1, ChainRuleIdentity::Cr2, ChainRuleIdentity::Cr3}) {
            const MeasureDiff d = chain_rule_check(u, id);
            all_zero = all_zero && d.density_exact_zero && d.atom_total_variation == 0;
        }
    }
    const MeasureDiff dropped = chain_rule_check(suite[0], ChainRuleIdentity::Cr3, false);
    const bool flips = dropped.density_exact_zero &&
                       dropped.atom_total_variation == Rational(1, 12);

    Outcome o;
    o.pass = all_zero && flips;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%zu fixtures x 3 identities residual %s; dropped-correction residual "
                  "%lld/%lld (expected 1/12)",
                  suite.size(), all_zero ? "exactly 0" : "NONZERO",
                  dropped.atom_total_variation.numerator(),
                  dropped.atom_total_variation.denominator());
    o.detail = buf;
    return o;
}

// ---------------------------------------------------------------------------
Outcome criterion5() {
    const Scenario& s = find_scenario("flat_shear");
    const Grid g = scenario_grid(s, 512);
    const SampledField u = sample_velocity(s, g, 0.0);
    const Kernel k = build_kernel(KernelProfile::standard_bump(), 2, 17);
    const Vec x0{0.2, 0.0};
    const std::vector<double> ladder{0.25, 0.125, 0.0625, 0.03125};

    // extrapolate against the dominant interpolation-error model (Δx/ℓ)²
    const double dx = g.spacing[0];
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> m11s;
    Mat finest{};
    for (double ell : ladder) {
        const Mat m = double_mollified_stress(u, k, ell, x0);
        finest = m;
        const double t = (dx / ell) * (dx / ell);
        m11s.push_back(m[0]);
        sx += t;
        sy += m[0];
        sxx += t * t;
        sxy += t * m[0];
    }
    const int n = int(ladder.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;

    const double target = 4.0 * oracle::kAlphaBar;  // ᾱ·|jump|² with |jump| = 2
    const double rel = std::abs(intercept - target) / target;
    const bool offdiag_ok = std::abs(finest[1]) < 1e-8 && std::abs(finest[3]) < 1e-8;

    // the independent oracle itself, plus the α identities
    const bool oracle_ok =
        std::abs(oracle::alpha_bar_2d_quadrature() - oracle::kAlphaBar) < 1e-7;
    const Kernel ka = build_kernel(KernelProfile::standard_bump(), 2, 33);
    const double ab = alpha_bar(ka);
    bool alpha_ok = ab > 0.0 && ab <= 0.25;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> c(-0.95, 0.95);
    for (int t = 0; t < 50; ++t) {
        const Vec y{c(rng), c(rng)};
        const double sum = alpha_profile(ka, y) + alpha_profile(ka, scale(y, -1.0));
        alpha_ok = alpha_ok && std::abs(sum - 1.0) < 1e-8;
    }

    Outcome o;
    o.pass = rel < 0.01 && offdiag_ok && oracle_ok && alpha_ok;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "stress(1,1) extrapolated %.6f vs 4*alpha_bar = %.6f (rel %.2e, tol 1e-2); "
                  "alpha identities %s",
                  intercept, target, rel, alpha_ok && oracle_ok ? "ok" : "VIOLATED");
    o.detail = buf;
    return o;
}

// ---------------------------------------------------------------------------
Outcome criterion6() {
    const Kernel radial = build_kernel(KernelProfile::standard_bump(), 2, 49);
    const double jI = anisotropy_functional(radial, mat_identity());
    const bool identity_ok = std::abs(jI - 2.0) < 1e-3;

    AnisotropyProblem prob;
    prob.M = mat_diag(1.0, -1.0);
    prob.budget = 500;
    prob.resolution = 49;
    prob.seed = 2024;
    const OptResult r = optimize_kernel(prob);
    const double ratio = r.best_J / r.radial_baseline;
    const bool reaches = r.best_J <= 0.2 * r.radial_baseline;

    bool bound_ok = true;
    for (const OptRecord& rec : r.trace)
        bound_ok = bound_ok && rec.J >= trace_lower_bound(prob.M) - 1e-6;
    // also across the identity-target run
    AnisotropyProblem probI;
    probI.M = mat_identity();
    probI.budget = 200;
    probI.resolution = 49;
    const OptResult rI = optimize_kernel(probI);
    for (const OptRecord& rec : rI.trace)
        bound_ok = bound_ok && rec.J >= trace_lower_bound(probI.M) - 1e-6;

    Outcome o;
    o.pass = identity_ok && reaches && bound_ok;
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "J(I)=%.6f (tol 1e-3); best J %.6f = %.2f x radial baseline %.6f (target "
                  "<= 0.2x, %d evals); lower bound %s. NOTE: linear images of one bump probe "
                  "only the similarity orbit A M A^{-1}; for symmetric trace-free M the "
                  "radial profile is orbit-optimal, so 0.2x is unreachable in this family.",
                  jI, r.best_J, ratio, r.radial_baseline, int(r.trace.size()),
                  bound_ok ? "holds" : "VIOLATED");
    o.detail = buf;
    return o;
}

// ---------------------------------------------------------------------------
Outcome criterion7() {
    const Kernel k = build_kernel(KernelProfile::standard_bump(), 2, 17);
    double worst_u = 0.0, worst_angle = 0.0, worst_smooth = 0.0;
    bool tags_ok = true;

    auto probe_scenario = [&](const std::string& id, const std::vector<double>& ladder) {
        const Scenario& s = find_scenario(id);
        const Grid g = scenario_grid(s, 512);
        const SampledField u = sample_velocity(s, g, 0.0);
        for (int i = 0; i < 8; ++i) {
            const JumpProfile truth = canonicalize(s.truth.jump_at((i + 0.5) / 8.0), 2);
            const BlowupClass c = classify_point(u, truth.location, ladder, k);
            if (c.tag != BlowupClass::Tag::Jump) {
                tags_ok = false;
                continue;
            }
            worst_u = std::max({worst_u, norm(sub(c.jump.u_plus, truth.u_plus), 2),
                                norm(sub(c.jump.u_minus, truth.u_minus), 2)});
            const double ca = std::clamp(dot(c.jump.nu, truth.nu, 2), -1.0, 1.0);
            worst_angle = std::max(worst_angle, std::acos(ca) * 180.0 / kPi);
        }
        // a smooth interior probe classifies as a Lebesgue point
        const BlowupClass lc = classify_point(u, s.truth.smooth_probe, ladder, k);
        tags_ok = tags_ok && lc.tag == BlowupClass::Tag::Lebesgue;
        worst_smooth = std::max(worst_smooth, lc.model_residual);
    };
    probe_scenario("flat_shear", {0.125, 0.0625, 0.03125, 0.015625});
    probe_scenario("circular_vortex_sheet", {0.25, 0.125, 0.0625, 0.03125});

    Outcome o;
    o.pass = tags_ok && worst_u < 2e-2 && worst_angle < 2.0 && worst_smooth < 1e-3;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "worst |Δu±| %.4f (tol 2e-2), worst angle %.3f deg (tol 2), smooth "
                  "residual %.2e (tol 1e-3), tags %s",
                  worst_u, worst_angle, worst_smooth, tags_ok ? "ok" : "WRONG");
    o.detail = buf;
    return o;
}

// ---------------------------------------------------------------------------
Outcome criterion8() {
    const Scenario& s = find_scenario("taylor_green");
    const Grid g = scenario_grid(s, 512);
    const SampledField u = sample_velocity(s, g, 0.0);
    const Kernel k = build_kernel(KernelProfile::standard_bump(), 2, 17);
    FluxScanInputs in;
    in.u = u;
    in.scenario_id = s.id;
    const TestFunction phi = bump_test_function(2, vec2(kPi, kPi), vec2(2.0, 2.0));
    const FluxScan scan = flux_scan(in, k, FluxKind::Cet, {0.4, 0.2, 0.1, 0.05}, phi, nullptr);

    const TestFunction lip = coordinate_bump_test_function(2, 0, vec2(kPi, kPi), vec2(2.0, 2.0));
    std::vector<double> ells{0.4, 0.2, 0.1, 0.05}, commutators;
    for (double ell : ells) commutators.push_back(commutator_norm(lip, u, k, ell));
    const double cexp = fit_loglog_exponent(ells, commutators);

    Outcome o;
    o.pass = scan.sup_exponent >= 1.7 && cexp >= 0.9;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "cet sup-norm exponent %.3f (need >= 1.7); commutator exponent %.3f "
                  "(need >= 0.9)",
                  scan.sup_exponent, cexp);
    o.detail = buf;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    using CriterionFn = Outcome (*)();
    const CriterionFn fns[8] = {criterion1, criterion2, criterion3, criterion4,
                                criterion5, criterion6, criterion7, criterion8};
    const char* names[8] = {
        "exact cancellations on the flat shear layer",
        "vortex-sheet pairings vanish over the ladder",
        "Burgers shock defect",
        "chain-rule ledger",
        "limiting subscale stress at a jump",
        "kernel anisotropy optimization",
        "blow-up classifier",
        "order checks (cet sup norm, commutator)",
    };

    int first = 1, last = 8;
    if (argc > 1) {
        const int c = std::atoi(argv[1]);
        if (c < 1 || c > 8) {
            std::fprintf(stderr, "usage: %s [criterion 1..8]\n", argv[0]);
            return 64;
        }
        first = last = c;
    }
    int failures = 0;
    for (int c = first; c <= last; ++c) {
        const Outcome o = fns[c - 1]();
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c, names[c - 1],
                    o.detail.c_str());
        if (!o.pass) ++failures;
    }
    return failures;
}
