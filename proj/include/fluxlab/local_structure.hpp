/// @file local_structure.hpp
/// @brief Blow-up classification at a point, one-sided limits, the precise
/// representative, the α profile and its kernel constant, and the limiting
/// jump quantities.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fluxlab/kernel.hpp"
#include "fluxlab/mollify.hpp"

namespace fluxlab {

/// Jump data at a point: one-sided limits and the unit normal pointing from
/// the minus side to the plus side. Canonical form: the first nonzero
/// component of nu is positive.
struct JumpProfile {
    Vec location{0.0, 0.0};
    Vec u_plus{0.0, 0.0};
    Vec u_minus{0.0, 0.0};
    Vec nu{0.0, 0.0};
};

JumpProfile canonicalize(const JumpProfile& j, int dim);

struct BlowupClass {
    enum class Tag { Lebesgue, Jump, Unresolved };
    Tag tag = Tag::Unresolved;
    Vec value{0.0, 0.0};          // Lebesgue: the approximate limit
    JumpProfile jump;             // Jump: the fitted profile
    std::vector<double> ells;     // ladder used
    std::vector<double> residuals;  // per-ℓ RMS misfit of the chosen model
    double model_residual = 0.0;  // misfit of the extrapolated blow-up
};

/// ∫ u(x₀ + ℓ(y−z)) ρ(z) dz by kernel quadrature. Requires a radial kernel.
Vec shifted_average(const SampledField& u, const Vec& x0, double ell, const Vec& y,
                    const Kernel& k);

struct ClassifyOptions {
    double lebesgue_rel_tol = 1e-3;  // vs max |u|
    double jump_rel_tol = 1e-2;
    double separation_factor = 10.0;  // |u⁺−u⁻| must exceed this × residual
    int coarse_directions = 128;      // hemisphere search resolution (2D)
};

/// Fits the shifted-average field over probe offsets to (i) a constant and
/// (ii) a two-sided profile α(y)u⁺ + (1−α(y))u⁻ with unknown (u⁺,u⁻,ν).
/// The per-probe data are Richardson-extrapolated over the ladder (≥ 4
/// scales) before model selection; per-ℓ misfits are reported alongside.
BlowupClass classify_point(const SampledField& u, const Vec& x0,
                           const std::vector<double>& ladder, const Kernel& k,
                           const ClassifyOptions& opts = {});

/// Approximate limit, or the arithmetic mean of the one-sided limits.
/// Throws ClassificationError on an unresolved tag.
Vec precise_representative(const BlowupClass& c);

/// Half-space mass α(y) = ∫_{B₁(y) ∩ ℝ^d_+} ρ(y−z) dz of a radial
/// nonnegative kernel; depends on y only through its last coordinate.
double alpha_profile(const Kernel& k, const Vec& y);

/// Mass of {⟨z, dir⟩ ≤ s} under the kernel quadrature, nodes on the cut
/// plane counted at half weight (so α(s) + α(−s) = 1 exactly).
double alpha_halfmass(const Kernel& k, const Vec& dir, double s);

/// ᾱ = ∫ α(y)(1−α(y)) ρ(y) dy. Kernel-intrinsic; cached per kernel id.
double alpha_bar(const Kernel& k);

/// ᾱ (u⁺−u⁻) ⊗ (u⁺−u⁻): the limiting subscale stress at a jump point.
Mat limit_reynolds(const JumpProfile& j, const Kernel& k);

/// ᾱ |u⁺−u⁻|² ⟨u⁺−u⁻, ν⟩: the limiting flux density on the jump set.
double jump_flux_density(const JumpProfile& j, const Kernel& k);

/// ((u⊗u)_ℓ − u_ℓ⊗u_ℓ)_ℓ(x₀) by nested quadrature (no intermediate
/// resampling). Converges to limit_reynolds at a jump point.
Mat double_mollified_stress(const SampledField& u, const Kernel& k, double ell,
                            const Vec& x0);

/// Structured-text report: one block per probe point.
void write_classification_report(std::ostream& os, const std::vector<Vec>& points,
                                 const std::vector<BlowupClass>& classes, int dim);

}  // namespace fluxlab
