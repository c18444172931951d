/// @file oracles.hpp
/// @brief Independent test oracles: closed-form constants and quadrature
/// routines kept separate from the library's own evaluation paths.

#pragma once

#include <cmath>
#include <functional>

#include "fluxlab/core.hpp"

namespace fluxlab::oracle {

// Half-space mass constant ᾱ = ∫ α(1−α)ρ dy of any nonnegative admissible
// kernel: substituting the marginal CDF A = α(s) turns the integral into
// ∫₀¹ A(1−A) dA = 1/6, independent of the profile and the dimension. The
// high-resolution quadrature below reproduces it; tests pin both.
inline constexpr double kAlphaBar = 1.0 / 6.0;

/// Composite 4-point Gauss–Legendre on [a,b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 256) {
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        for (int q = 0; q < 4; ++q) s += gw[q] * f(c + 0.5 * h * gx[q]);
    }
    return s * 0.5 * h;
}

/// Normalized 1D standard bump profile c₁ exp(-1/(1-s²)).
inline double bump_profile_1d(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    static const double c = 1.0 / integrate(
        [](double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; },
        -1.0, 1.0, 2048);
    return c * std::exp(-1.0 / (1.0 - s * s));
}

/// y-marginal m(t) = ∫ ρ(t, y) dy of the normalized 2D standard bump.
inline double bump_marginal_2d(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    static const double c = [] {
        const double mass = integrate(
            [](double r) {
                return r < 1.0 ? 2.0 * kPi * r * std::exp(-1.0 / (1.0 - r * r)) : 0.0;
            },
            0.0, 1.0, 2048);
        return 1.0 / mass;
    }();
    const double w = std::sqrt(1.0 - t * t);
    return c * integrate(
        [&](double y) {
            const double r2 = t * t + y * y;
            return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
        },
        -w, w, 512);
}

/// CDF of the 2D marginal: the continuum half-space mass α(s).
inline double alpha_2d(double s) {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return integrate(bump_marginal_2d, -1.0, s, 512);
}

/// High-resolution independent computation of ᾱ for the 2D standard bump.
inline double alpha_bar_2d_quadrature() {
    return integrate([](double s) { return alpha_2d(s) * (1.0 - alpha_2d(s)) * bump_marginal_2d(s); },
                     -1.0, 1.0, 256);
}

/// Mollified sign profile S(t) = ∫ sgn(t - w) m(w) dw = 2α(t) − 1 for the
/// 2D bump; the shear-layer mollification oracle.
inline double mollified_sign_2d(double t) { return 2.0 * alpha_2d(t) - 1.0; }

}  // namespace fluxlab::oracle
