/// @file mollify.hpp
/// @brief Convolution of sampled fields against kernel quadrature.
///
/// u_ℓ(x) = Σ_i w_i ρ(z_i) u(x - ℓ z_i) with multilinear field evaluation.
/// Derivatives of mollified fields always come from the kernel gradient
/// (u ∗ ∂ρ_ℓ), never from differencing u_ℓ. Window-wide passes precompute the
/// bilinear stencil per kernel node (the fractional offset is the same at
/// every output point of a uniform grid) and parallelize over points.

#pragma once

#include <functional>
#include <vector>

#include "fluxlab/grid.hpp"
#include "fluxlab/kernel.hpp"
#include "fluxlab/testfn.hpp"

namespace fluxlab {

struct WindowedField {
    SampledField field;  // zero outside the window
    InteriorWindow window;
};

enum class KernelCoeff { Value, DerivX, DerivY };

/// One convolution pass over a set of grid points: component `comp` of u
/// against kernel values (Value) or gradients/ℓ (DerivX/DerivY, the exact
/// derivative of the mollification). Requires ℓ ≥ 4Δx and win.margin ≥ ℓ.
std::vector<double> convolve_window(const SampledField& u, int comp, const Kernel& k,
                                    double ell, KernelCoeff which,
                                    const InteriorWindow& win);

/// Increment-cubed contraction used by the pointwise dissipation estimator:
/// out(x) = (prefactor/ℓ) Σ_i w_i ∇ρ(z_i)·δ_i |δ_i|², δ_i = u(x+ℓz_i) − u(x).
std::vector<double> increment_flux_window(const SampledField& u, const Kernel& k,
                                          double ell, double prefactor,
                                          const InteriorWindow& win);

/// u ∗ ρ_ℓ restricted to the interior window of margin ℓ.
WindowedField mollify(const SampledField& u, const Kernel& k, double ell);

/// Pointwise mollification (all components) at an arbitrary interior point.
Vec mollify_at(const SampledField& u, const Kernel& k, double ell, const Vec& x);

/// Pointwise mollification of a functional field: (f ∗ ρ_ℓ)(x). Used to nest
/// mollifications without resampling, so double mollification regroups
/// exactly into a single pass with the self-convolved kernel.
Vec mollify_fn_at(const std::function<Vec(const Vec&)>& f, const Kernel& k, double ell,
                  const Vec& x);

/// sup over the margin-2ℓ interior window of |(φ u_ℓ)_ℓ − φ (u_ℓ)_ℓ|,
/// maximized over components. Decays like Lip(φ)·ℓ for bounded u.
double commutator_norm(const TestFunction& phi, const SampledField& u, const Kernel& k,
                       double ell);

/// Grid-quadrature pairing Σ vol · field[k] · φ(x_k) over window points.
double pair_with_test_function(const std::vector<double>& field_on_window,
                               const InteriorWindow& win, const Grid& g,
                               const TestFunction& phi);

double sup_abs(const std::vector<double>& field_on_window);

}  // namespace fluxlab
