/// @file kernel.hpp
/// @brief Admissible mollifier kernels discretized on a symmetric midpoint
/// lattice inside the unit ball.
///
/// Quadrature layout: per axis, 2R midpoint cells on [-1,1], node
/// z_k = -1 + (k + 1/2)/R, lattice pitch h = 1/R. The node set is exactly
/// symmetric under z -> -z, which makes evenness node-wise exact. Values are
/// post-normalized so the discrete mass Σ w ρ is exactly 1, and gradients are
/// evaluated analytically from the profile formula (never by differencing).
///
/// self_convolve aggregates products on the sum lattice, so a nested
/// quadrature with ρ twice regroups term-by-term into a single quadrature
/// with ρ∗ρ. Downstream identities rely on that exact regrouping.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fluxlab/core.hpp"

namespace fluxlab {

struct Kernel {
    int dim = 2;
    std::string id;
    bool radial = false;
    bool half_support = false;
    double lattice_pitch = 0.0;
    std::vector<Vec> nodes;
    std::vector<double> weights;    // quadrature cell volumes
    std::vector<double> values;     // ρ(z), normalized: Σ w ρ == 1
    std::vector<Vec> gradients;     // ∇ρ(z), same normalization

    double mass() const;
    Vec second_moment() const;      // per-axis Σ w ρ z_a²
    /// sqrt of second moment per axis; max/min ratio measures anisotropy.
    Vec directional_width() const;
    bool nonnegative() const;
};

struct KernelProfile {
    enum class Family { StandardBump, AnisotropicBump };
    Family family = Family::StandardBump;
    bool half_support = false;  // squeeze the support into B_{1/2}
    Mat A = mat_identity();     // AnisotropicBump shape, det A > 0

    static KernelProfile standard_bump(bool half = false);
    static KernelProfile anisotropic_bump(const Mat& A, bool half = false);
};

/// Discretize a profile at `resolution` nodes per radius per axis.
/// Throws ResolutionError below 17 and ParameterError on a singular shape.
Kernel build_kernel(const KernelProfile& profile, int dim, int resolution);

/// η = ρ∗ρ on the sum lattice. Requires half_support (so supp η ⊆ B₁);
/// throws PreconditionError otherwise.
Kernel self_convolve(const Kernel& rho);

/// Flat node table (z, ρ, ∇ρ, w) for cross-checks against independent
/// quadrature.
void dump_kernel(std::ostream& os, const Kernel& k);

}  // namespace fluxlab
