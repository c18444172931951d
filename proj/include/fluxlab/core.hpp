/// @file core.hpp
/// @brief Shared small-vector helpers and the error taxonomy.
///
/// All fields live in d ∈ {1,2}. Vec/Mat are fixed-size and padded: in 1D the
/// second component is zero and ignored. Keeping them as plain arrays keeps
/// every operation trivially copyable and hot loops allocation-free.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fluxlab {

inline constexpr double kPi = 3.14159265358979323846;

using Vec = std::array<double, 2>;
using Mat = std::array<double, 4>;  // row-major 2x2

inline Vec vec1(double x) { return {x, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y}; }

inline Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec scale(const Vec& a, double c) { return {c * a[0], c * a[1]}; }

inline double dot(const Vec& a, const Vec& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
}
inline double norm(const Vec& a, int dim) { return std::sqrt(dot(a, a, dim)); }

inline Mat mat_identity() { return {1.0, 0.0, 0.0, 1.0}; }
inline Mat mat_diag(double a, double b) { return {a, 0.0, 0.0, b}; }
inline double mat_at(const Mat& m, int i, int j) { return m[2 * i + j]; }
inline Vec mat_apply(const Mat& m, const Vec& v) {
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}
inline Mat mat_mul(const Mat& a, const Mat& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
inline Mat mat_transpose(const Mat& m) { return {m[0], m[2], m[1], m[3]}; }
inline double mat_trace(const Mat& m, int dim) { return dim == 1 ? m[0] : m[0] + m[3]; }
inline double mat_det(const Mat& m) { return m[0] * m[3] - m[1] * m[2]; }
inline Mat mat_scale(const Mat& m, double c) { return {c * m[0], c * m[1], c * m[2], c * m[3]}; }
inline Mat rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
}
inline Mat outer(const Vec& a, const Vec& b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

/// Singular values of a 2x2 matrix, returned as (smax, smin).
inline std::array<double, 2> singular_values(const Mat& m) {
    // eigenvalues of m^T m
    const double a = m[0] * m[0] + m[2] * m[2];
    const double b = m[0] * m[1] + m[2] * m[3];
    const double c = m[1] * m[1] + m[3] * m[3];
    const double tr = a + c;
    const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4.0 * b * b));
    const double l1 = 0.5 * (tr + disc);
    const double l2 = 0.5 * std::max(0.0, tr - disc);
    return {std::sqrt(l1), std::sqrt(l2)};
}

// Error taxonomy. Callers distinguish failure modes by type; the what()
// string names the operation and the violated requirement.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RegistryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ClassificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fluxlab
