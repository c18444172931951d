#include "fluxlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

namespace fluxlab {

double Kernel::mass() const {
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * values[i];
    return s;
}

Vec Kernel::second_moment() const {
    Vec m{0.0, 0.0};
    for (size_t i = 0; i < nodes.size(); ++i) {
        for (int a = 0; a < dim; ++a)
            m[a] += weights[i] * values[i] * nodes[i][a] * nodes[i][a];
    }
    return m;
}

Vec Kernel::directional_width() const {
    const Vec m = second_moment();
    Vec w{0.0, 0.0};
    for (int a = 0; a < dim; ++a) w[a] = std::sqrt(std::max(0.0, m[a]));
    return w;
}

bool Kernel::nonnegative() const {
    for (double v : values)
        if (v < 0.0) return false;
    return true;
}

KernelProfile KernelProfile::standard_bump(bool half) {
    KernelProfile p;
    p.family = Family::StandardBump;
    p.half_support = half;
    return p;
}

KernelProfile KernelProfile::anisotropic_bump(const Mat& A, bool half) {
    KernelProfile p;
    p.family = Family::AnisotropicBump;
    p.A = A;
    p.half_support = half;
    return p;
}

namespace {

// base profile exp(-1/(1-|w|^2)) and its radial derivative factor
inline double base_value(double r2) {
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}
inline double base_grad_factor(double r2) {
    // ∇exp(-1/(1-|w|^2)) = value * (-2 w / (1-|w|^2)^2); returns the scalar factor
    if (r2 >= 1.0) return 0.0;
    const double q = 1.0 - r2;
    return -2.0 / (q * q);
}

std::string profile_id(const KernelProfile& p, int dim, int resolution) {
    std::ostringstream ss;
    if (p.family == KernelProfile::Family::StandardBump) {
        ss << "bump";
    } else {
        char buf[96];
        std::snprintf(buf, sizeof buf, "aniso[%.6g,%.6g;%.6g,%.6g]", p.A[0], p.A[1], p.A[2],
                      p.A[3]);
        ss << buf;
    }
    if (p.half_support) ss << "-half";
    ss << "-d" << dim << "-r" << resolution;
    return ss.str();
}

}  // namespace

Kernel build_kernel(const KernelProfile& profile, int dim, int resolution) {
    if (dim != 1 && dim != 2) throw ParameterError("build_kernel: dim must be 1 or 2");
    if (resolution < 17)
        throw ResolutionError("build_kernel: need at least 17 nodes per radius per axis");

    // Shape matrix B applied to z before the base profile. For the standard
    // bump B = I. Anisotropic shapes are rescaled by their smallest singular
    // value so the support {|Bz|<1} fits the unit ball exactly. Half-support
    // variants get an extra factor 2 (support in B_{1/2}).
    Mat B = mat_identity();
    bool radial = true;
    if (profile.family == KernelProfile::Family::AnisotropicBump) {
        const double det = mat_det(profile.A);
        if (!(det > 0.0)) throw ParameterError("build_kernel: anisotropy matrix must have det > 0");
        const auto sv = singular_values(profile.A);
        if (!(sv[1] > 0.0)) throw ParameterError("build_kernel: anisotropy matrix is singular");
        B = mat_scale(profile.A, 1.0 / sv[1]);
        radial = sv[0] / sv[1] - 1.0 < 1e-12;
    }
    if (profile.half_support) B = mat_scale(B, 2.0);

    Kernel k;
    k.dim = dim;
    k.radial = radial;
    k.half_support = profile.half_support;
    k.lattice_pitch = 1.0 / resolution;
    k.id = profile_id(profile, dim, resolution);

    const int n = 2 * resolution;
    const double h = 1.0 / resolution;
    const double w = dim == 1 ? h : h * h;
    // mirror-exact axis coordinates: coord(n-1-i) is the bitwise negation of
    // coord(i), so evenness and odd-sum cancellations hold to the last ulp
    std::vector<double> coord(n);
    for (int i = 0; i < resolution; ++i) {
        const double v = (i + 0.5) * h;
        coord[resolution + i] = v;
        coord[resolution - 1 - i] = -v;
    }
    const int ny = dim == 1 ? 1 : n;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < n; ++i) {
            Vec z{coord[i], 0.0};
            if (dim == 2) z[1] = coord[j];
            if (dot(z, z, dim) >= 1.0) continue;
            Vec bz = dim == 2 ? mat_apply(B, z) : vec1(B[0] * z[0]);
            const double r2 = dot(bz, bz, dim);
            const double v = base_value(r2);
            if (v == 0.0) continue;  // symmetric pruning keeps evenness exact
            const double gf = base_grad_factor(r2) * v;
            Vec grad;
            if (dim == 2) {
                const Vec g0 = scale(bz, gf);
                grad = mat_apply(mat_transpose(B), g0);
            } else {
                grad = vec1(B[0] * gf * bz[0]);
            }
            k.nodes.push_back(z);
            k.weights.push_back(w);
            k.values.push_back(v);
            k.gradients.push_back(grad);
        }
    }
    if (k.nodes.empty())
        throw ResolutionError("build_kernel: no quadrature node falls inside the support");

    // post-normalize: discrete unit mass is exact, not approximate
    const double m = k.mass();
    for (size_t i = 0; i < k.nodes.size(); ++i) {
        k.values[i] /= m;
        k.gradients[i] = scale(k.gradients[i], 1.0 / m);
    }
    return k;
}

Kernel self_convolve(const Kernel& rho) {
    if (!rho.half_support)
        throw PreconditionError("self_convolve: kernel must be supported in the half ball");
    const double h = rho.lattice_pitch;
    const int R = int(std::lround(1.0 / h));
    const int n = 4 * R;  // sum-lattice index range: y = -2 + m*h, m in [1, 4R-1]

    // lattice index of a node: z = -1 + (k + 1/2) h
    auto node_index = [&](const Vec& z, int axis) {
        return int(std::lround((z[axis] + 1.0) / h - 0.5));
    };

    const int dim = rho.dim;
    const size_t cells = dim == 1 ? n : size_t(n) * n;
    std::vector<double> acc_v(cells, 0.0);
    std::vector<Vec> acc_g(cells, Vec{0.0, 0.0});

    const size_t N = rho.nodes.size();
    std::vector<int> ki(N), kj(N);
    for (size_t i = 0; i < N; ++i) {
        ki[i] = node_index(rho.nodes[i], 0);
        kj[i] = dim == 2 ? node_index(rho.nodes[i], 1) : 0;
    }
    for (size_t i = 0; i < N; ++i) {
        const double wvi = rho.weights[i] * rho.values[i];
        const Vec wgi = scale(rho.gradients[i], rho.weights[i]);
        for (size_t j = 0; j < N; ++j) {
            const double wvj = rho.weights[j] * rho.values[j];
            const int mi = ki[i] + ki[j] + 1;
            const size_t cell = dim == 1 ? size_t(mi) : size_t(mi) * n + (kj[i] + kj[j] + 1);
            acc_v[cell] += wvi * wvj;
            acc_g[cell] = add(acc_g[cell], scale(wgi, wvj));
        }
    }

    Kernel eta;
    eta.dim = dim;
    eta.radial = rho.radial;
    eta.half_support = false;
    eta.lattice_pitch = h;
    eta.id = rho.id + "*self";
    const double w = dim == 1 ? h : h * h;
    for (size_t cell = 0; cell < cells; ++cell) {
        if (acc_v[cell] == 0.0) continue;
        const int mi = dim == 1 ? int(cell) : int(cell / n);
        const int mj = dim == 1 ? 0 : int(cell % n);
        // (m − 2R)·h keeps the sum lattice bitwise symmetric under negation
        Vec y{(mi - 2 * R) * h, 0.0};
        if (dim == 2) y[1] = (mj - 2 * R) * h;
        eta.nodes.push_back(y);
        eta.weights.push_back(w);
        eta.values.push_back(acc_v[cell] / w);
        eta.gradients.push_back(scale(acc_g[cell], 1.0 / w));
    }
    const double m = eta.mass();
    for (size_t i = 0; i < eta.nodes.size(); ++i) {
        eta.values[i] /= m;
        eta.gradients[i] = scale(eta.gradients[i], 1.0 / m);
    }
    return eta;
}

void dump_kernel(std::ostream& os, const Kernel& k) {
    os << "# kernel " << k.id << " dim=" << k.dim << " radial=" << (k.radial ? 1 : 0)
       << " half_support=" << (k.half_support ? 1 : 0) << "\n";
    os << "# columns: z[0] z[1] rho grad[0] grad[1] w\n";
    char buf[256];
    for (size_t i = 0; i < k.nodes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g %.17g\n", k.nodes[i][0],
                      k.nodes[i][1], k.values[i], k.gradients[i][0], k.gradients[i][1],
                      k.weights[i]);
        os << buf;
    }
}

}  // namespace fluxlab
