/// @file testfn.hpp
/// @brief Closed-form compactly supported test functions.
///
/// The library is deliberately small so reports are comparable across
/// scenarios: tensor products of 1D C^∞ bumps, optionally multiplied by one
/// coordinate. Values and gradients are evaluated in closed form; grid
/// quadrature only ever touches the fields.

#pragma once

#include <array>
#include <string>

#include "fluxlab/core.hpp"

namespace fluxlab {

/// 1D bump b(s) = exp(1 - 1/(1-s^2)) on |s|<1, b(0) = 1, zero outside.
double bump1d(double s);
double bump1d_deriv(double s);

struct TestFunction {
    int dim = 2;
    Vec center{0.0, 0.0};
    Vec radius{1.0, 1.0};     // per-axis support half-width
    int coordinate_axis = -1; // >= 0: multiply by (x[axis] - center[axis])
    double lipschitz = 0.0;   // computed bound, filled by the factories
    std::string name;

    double operator()(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    /// Support box as (lo, hi) corners.
    std::array<Vec, 2> support_box() const;
};

TestFunction bump_test_function(int dim, const Vec& center, const Vec& radius);
TestFunction coordinate_bump_test_function(int dim, int axis, const Vec& center,
                                           const Vec& radius);

/// Smooth compactly supported profile in time; pairs with a TestFunction to
/// form a separable space-time test function.
struct TimeProfile {
    double center = 0.0;
    double radius = 1.0;
    double operator()(double t) const { return bump1d((t - center) / radius); }
    double deriv(double t) const { return bump1d_deriv((t - center) / radius) / radius; }
    /// ∫ φ_t dt by high-order quadrature (closed form profile).
    double mass() const;
};

struct SpaceTimeTestFunction {
    TestFunction space;
    TimeProfile time;
    double operator()(const Vec& x, double t) const { return space(x) * time(t); }
};

}  // namespace fluxlab
