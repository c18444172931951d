/// @file bv1d.hpp
/// @brief Exact one-dimensional BV measure calculus.
///
/// Piecewise-polynomial functions with rational breakpoints carry their
/// distributional derivative exactly: an absolutely continuous density
/// (the piecewise classical derivative) plus one atom per breakpoint. The
/// three chain-rule identities and the shock entropy defect are verified in
/// rational arithmetic, so "residual zero" means exactly zero.
///
/// Conventions: the precise representative at a breakpoint is the midpoint
/// (u⁺+u⁻)/2, and a product of a measure with a function uses the function's
/// precise value at atoms. Orientation: ν_x = +1 means u⁻ is the left limit.

#pragma once

#include <boost/rational.hpp>
#include <iosfwd>
#include <string>
#include <vector>

#include "fluxlab/core.hpp"
#include "fluxlab/testfn.hpp"

namespace fluxlab {

using Rational = boost::rational<long long>;

double to_double(const Rational& r);

/// Dense polynomial, ascending coefficients.
struct Polynomial {
    std::vector<Rational> coeffs;

    static Polynomial constant(const Rational& c) { return {{c}}; }
    Rational eval(const Rational& x) const;
    double eval(double x) const;
    Polynomial derivative() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const Rational& c) const;
    bool is_zero() const;
};

/// u on [lo, hi], smooth polynomial pieces between strictly increasing
/// breakpoints; pieces.size() == breakpoints.size() + 1.
struct PiecewiseBV {
    Rational lo = -1, hi = 1;
    std::vector<Rational> breakpoints;
    std::vector<Polynomial> pieces;

    void validate() const;  // throws InputError
    Rational left_limit(size_t i) const { return pieces[i].eval(breakpoints[i]); }
    Rational right_limit(size_t i) const { return pieces[i + 1].eval(breakpoints[i]); }
    Rational precise_value(size_t i) const {
        return (left_limit(i) + right_limit(i)) / 2;
    }
    /// Pointwise value for quadrature; exact midpoint at breakpoints.
    double eval(double x) const;
    /// Composes with the monomial power p ↦ uᵖ piece-wise.
    PiecewiseBV power(int p) const;
};

/// Signed measure = absolutely continuous density (piecewise polynomial on
/// the same partition) + finitely many atoms.
struct SignedMeasure1D {
    Rational lo = -1, hi = 1;
    std::vector<Rational> breakpoints;
    std::vector<Polynomial> density;
    std::vector<std::pair<Rational, Rational>> atoms;  // (location, weight)

    /// ⟨μ, φ⟩ by quadrature of the density plus exact atom sums.
    double pair(const TestFunction& phi) const;
};

/// Du: density = piecewise classical derivative, atoms = one-sided jumps.
SignedMeasure1D derivative_measure(const PiecewiseBV& u);

enum class ChainRuleIdentity { Cr1, Cr2, Cr3 };

struct MeasureDiff {
    bool density_exact_zero = true;
    Rational atom_total_variation = 0;   // exact when density_exact_zero
    double density_total_variation = 0;  // numeric fallback otherwise
    double total_variation() const;
};

/// Total-variation norm of lhs − rhs for the requested identity, computed in
/// rational arithmetic. `with_jump_correction=false` drops the 1/8 |[u]|²
/// atom term of the third identity (which then fails on jumps by exactly
/// |[u]|³/12 per atom).
MeasureDiff chain_rule_check(const PiecewiseBV& u, ChainRuleIdentity id,
                             bool with_jump_correction = true);

struct ShockDescription {
    Rational u_minus = 1, u_plus = -1;
    Rational speed = 0;
    int nu_x = +1;           // +1: u_minus is the left limit
    Rational position = 0;   // shock location at the reference time
    bool burgers = true;
};

/// Entropy defect of a Burgers shock as a measure per unit time: a single
/// atom of weight (u⁺−u⁻)³ν_x/12 (the √(1+s²) length factor cancels against
/// the space-time normal normalization). Rankine–Hugoniot is enforced for
/// Burgers-tagged shocks; violations throw InputError.
SignedMeasure1D burgers_entropy_defect(const ShockDescription& shock);

/// −∫∫ (u²/2 ∂_tφ + u³/3 ∂ₓφ) dx dt for a single-shock piecewise-constant
/// entropy solution, by per-side Gauss quadrature. This is the independent
/// oracle the flux meters and the entropy defect are checked against.
double burgers_weak_residual(const ShockDescription& shock,
                             const SpaceTimeTestFunction& phi);

// --- fixture file format ------------------------------------------------------
// Structured text: interval, breakpoints, one coefficient list per piece;
// rationals written p or p/q.
PiecewiseBV read_bv_fixture(std::istream& is);
void write_bv_fixture(std::ostream& os, const PiecewiseBV& u);

/// Per-identity residual report for a fixture suite.
void write_chain_rule_report(std::ostream& os, const std::vector<std::string>& names,
                             const std::vector<PiecewiseBV>& fixtures);

}  // namespace fluxlab
