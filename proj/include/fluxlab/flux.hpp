/// @file flux.hpp
/// @brief Approximate dissipation fluxes at scale ℓ, weak pairings, and
/// scale scans.
///
/// All flux outputs are restricted to the interior window with margin 2ℓ
/// (scale times one plus the kernel support radius). Pointwise gradients of
/// mollified quantities always come through the kernel gradient.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fluxlab/kernel.hpp"
#include "fluxlab/mollify.hpp"

namespace fluxlab {

struct ReynoldsStress {
    Grid grid;
    InteriorWindow window;
    double ell = 0.0;
    // symmetric components on window points; yy unused in 1D
    std::vector<double> xx, xy, yy;
};

/// R^ℓ = (u ⊗ u)_ℓ − u_ℓ ⊗ u_ℓ, componentwise; symmetric and, for
/// nonnegative kernels, positive semidefinite at every point.
ReynoldsStress reynolds_stress(const SampledField& u, const Kernel& k, double ell);

/// R^ℓ : ∇u_ℓ on the interior window.
WindowedField cet_flux(const SampledField& u, const Kernel& k, double ell);

/// Increment-based dissipation estimator. Vector fields: the quartic-kernel
/// form (1/4ℓ) ∫ ∇ρ(z)·δ_{ℓz}u |δ_{ℓz}u|² dz. Scalar fields run in Burgers
/// mode: −(1/12ℓ) ∫ ρ'(z) δ³ dz, normalized so the pairing estimates the
/// energy-balance side −⟨D, φ⟩ (a stationary unit shock pairs to −(2/3)φ(0)).
WindowedField dr_flux(const SampledField& u, const Kernel& k, double ell);

/// Weak pairing ∫ φ (R^ℓ)_ℓ : d(Eu), realized by parts against the smooth
/// factor: −∫ u · div(φ (R^ℓ)_ℓ) dx. Requires a radial kernel.
double bd_flux_pair(const SampledField& u, const Kernel& k, double ell,
                    const TestFunction& phi);

struct EulerFields {
    SampledField u;
    std::optional<SampledField> p;
    std::optional<SampledField> f;
    bool burgers = false;  // flux u³/3, no pressure
};

/// Space-time weak residual ⟨∂_t(|u_ℓ|²/2) + div(u_ℓ(|u_ℓ|²/2 + p_ℓ)), φ⟩
/// − ⟨f_ℓ·u_ℓ, φ⟩ for a stationary slice; the ∂_t term vanishes against the
/// separable test function. Its ℓ→0 limit estimates −⟨D, φ⟩.
double energy_balance_residual(const EulerFields& in, const SpaceTimeTestFunction& phi,
                               const Kernel& k, double ell);

/// Instantaneous residual density at mid-time from two adjacent slices
/// (centered time difference); the caller integrates over the time profile.
double energy_balance_density(const SampledField& u_minus, const SampledField& u_plus,
                              double dt, const std::optional<SampledField>& p_mid,
                              const std::optional<SampledField>& f_mid, bool burgers,
                              const SpaceTimeTestFunction& phi, double t_mid,
                              const Kernel& k, double ell);

/// ⟨(Λu_ℓ) u_ℓ · u_ℓ, φ⟩ = ∫ φ (Λu_ℓ) : (u_ℓ ⊗ u_ℓ) dx. Identically zero by
/// the antisymmetric–symmetric contraction; exists to certify the discrete
/// identity. Requires a half-support kernel and a 2D field.
double vorticity_form_residual(const SampledField& u, const Kernel& k, double ell,
                               const TestFunction& phi);

// --- scale scans -------------------------------------------------------------

enum class FluxKind { Cet, Dr, Bd, Energy };

std::string flux_kind_name(FluxKind k);

struct FluxScanInputs {
    SampledField u;
    std::optional<SampledField> p;
    std::optional<SampledField> f;
    bool burgers = false;
    std::string scenario_id;
};

struct FluxScan {
    std::string kind, scenario_id, kernel_id;
    std::vector<double> ells;       // strictly decreasing, ratio 2
    std::vector<double> pairings;   // ⟨D_ℓ, φ⟩ (× time mass when given)
    std::vector<double> sup_stats;  // max |D_ℓ| over the interior window
    double sup_exponent = 0.0;      // least-squares log–log decay of sup_stats
    double pairing_order = 0.0;     // Richardson order estimate of the pairings
    double extrapolated = 0.0;      // Richardson limit of the pairings
};

/// Runs one flux kind over a geometric ladder (ratio 2, every ℓ ≥ 4Δx, φ
/// supported inside the margin-2ℓ_max window). Deterministic.
FluxScan flux_scan(const FluxScanInputs& in, const Kernel& k, FluxKind kind,
                   const std::vector<double>& ladder, const TestFunction& phi,
                   const TimeProfile* time_profile = nullptr);

/// CSV with one row per (scan, ℓ); schema versioned in the header comment.
void write_scan_csv(std::ostream& os, const std::vector<FluxScan>& scans);

// --- small numeric helpers shared by scans and tests -------------------------

/// Least-squares slope of log|v| against log ℓ; NaN when any |v| vanishes.
double fit_loglog_exponent(const std::vector<double>& ells, const std::vector<double>& v);

/// Richardson order estimate (median of local orders, clamped to [0.5, 3]);
/// falls back to the declared first-order assumption on short ladders.
double richardson_order(const std::vector<double>& v);

/// Richardson limit of v over a ratio-2 ladder with the given order.
double richardson_limit(const std::vector<double>& v, double order);

}  // namespace fluxlab
