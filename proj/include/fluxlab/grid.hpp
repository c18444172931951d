/// @file grid.hpp
/// @brief Uniform cell-centered grids, sampled fields, interior windows,
/// increments and the two structure-function diagnostics.
///
/// Grid nodes sit at cell centers: node i of axis a is at
/// origin[a] + (i + 1/2) * spacing[a]. Analytic scenarios sampled this way
/// never place a node exactly on a jump set. Field evaluation between nodes
/// is multilinear; on non-periodic axes the valid evaluation region is the
/// node hull [first node, last node].

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "fluxlab/core.hpp"
#include "fluxlab/testfn.hpp"

namespace fluxlab {

struct Grid {
    int dim = 2;
    Vec origin{0.0, 0.0};
    Vec spacing{1.0, 1.0};
    std::array<int, 2> counts{8, 8};
    std::array<bool, 2> periodic{false, false};

    static Grid line(double x0, double extent, int n, bool periodic = false);
    static Grid square(double x0, double y0, double extent_x, double extent_y,
                       int nx, int ny, bool periodic = false);

    void validate() const;  // throws ParameterError on a bad grid
    int64_t num_points() const {
        int64_t n = counts[0];
        if (dim == 2) n *= counts[1];
        return n;
    }
    double extent(int axis) const { return spacing[axis] * counts[axis]; }
    double cell_volume() const { return dim == 1 ? spacing[0] : spacing[0] * spacing[1]; }
    Vec point(int64_t flat) const {
        if (dim == 1) return {origin[0] + (flat + 0.5) * spacing[0], 0.0};
        const int64_t i = flat % counts[0], j = flat / counts[0];
        return {origin[0] + (i + 0.5) * spacing[0], origin[1] + (j + 0.5) * spacing[1]};
    }
    int64_t flat_index(int i, int j = 0) const { return i + int64_t(counts[0]) * j; }
    /// First/last node coordinate along an axis (the evaluation hull).
    double node_lo(int axis) const { return origin[axis] + 0.5 * spacing[axis]; }
    double node_hi(int axis) const {
        return origin[axis] + (counts[axis] - 0.5) * spacing[axis];
    }
    bool same_layout(const Grid& o) const;
};

struct SampledField {
    Grid grid;
    int components = 1;  // 1 (scalar) or dim (vector)
    double time = 0.0;
    std::vector<double> values;  // [point * components + c], axis-0 index fastest

    double value(int64_t point, int c = 0) const { return values[point * components + c]; }
    double& value(int64_t point, int c = 0) { return values[point * components + c]; }
    Vec vector_value(int64_t point) const {
        Vec v{values[point * components], 0.0};
        if (components > 1) v[1] = values[point * components + 1];
        return v;
    }
    double max_abs() const;
};

SampledField sample_scalar(const Grid& g, const std::function<double(const Vec&)>& f,
                           double time = 0.0);
SampledField sample_vector(const Grid& g, const std::function<Vec(const Vec&)>& f,
                           double time = 0.0);

/// Grid points at distance > margin from the node hull on every non-periodic
/// axis. Everything mollified or differenced at scale ℓ is only reported on
/// such a window.
struct InteriorWindow {
    double margin = 0.0;
    std::vector<int64_t> indices;
};

InteriorWindow interior_window(const Grid& g, double margin);

/// Multilinear evaluation. Throws std::domain_error outside the hull of a
/// non-periodic axis; periodic axes wrap.
Vec eval_field(const SampledField& u, const Vec& x);

/// u(x + ℓz) − u(x) under multilinear interpolation.
Vec increment(const SampledField& u, const Vec& x, double ell, const Vec& z);

/// Weak divergence ∫ u · ∇φ dx by grid quadrature. Near zero certifies
/// discrete incompressibility. Throws std::domain_error when φ's support
/// box touches a non-periodic boundary.
double divergence_residual(const SampledField& u, const TestFunction& phi);

enum class StructureMode { Absolute, Longitudinal };

/// ‖u(·+h) − u(·)‖_L1 / |h| (Absolute) or ‖⟨h, u(·+h) − u(·)⟩‖_L1 / |h|²
/// (Longitudinal), both restricted to the interior window of margin |h|.
/// Throws ResolutionError when |h| < Δx.
double structure_norm(const SampledField& u, const Vec& h, StructureMode mode);

// --- flat field table serialization -----------------------------------------
// Text format, one header block then one line per grid point (axis-0 index
// fastest), columns = component values. Exact layout documented in README.
void write_field_table(std::ostream& os, const SampledField& u);
SampledField read_field_table(std::istream& is);

}  // namespace fluxlab
