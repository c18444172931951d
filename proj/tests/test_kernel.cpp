#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "fluxlab/kernel.hpp"
#include "oracles.hpp"

using namespace fluxlab;

TEST_CASE("standard bump: exact unit mass and node-wise evenness") {
    for (int dim : {1, 2}) {
        const Kernel k = build_kernel(KernelProfile::standard_bump(), dim, 17);
        CHECK(k.mass() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(k.radial);
        CHECK(k.nonnegative());
        // evenness: every node has its mirror with the identical value
        std::map<std::pair<double, double>, double> table;
        for (size_t i = 0; i < k.nodes.size(); ++i)
            table[{k.nodes[i][0], k.nodes[i][1]}] = k.values[i];
        for (size_t i = 0; i < k.nodes.size(); ++i) {
            auto it = table.find({-k.nodes[i][0], -k.nodes[i][1]});
            REQUIRE(it != table.end());
            CHECK(it->second == k.values[i]);
        }
    }
}

TEST_CASE("half-support rescaling keeps normalization and flags") {
    const Kernel k = build_kernel(KernelProfile::standard_bump(true), 2, 17);
    CHECK(k.half_support);
    CHECK(k.mass() == doctest::Approx(1.0).epsilon(1e-14));
    for (size_t i = 0; i < k.nodes.size(); ++i)
        CHECK(norm(k.nodes[i], 2) < 0.5 + 1e-12);
}

TEST_CASE("anisotropic bump: admissible with the requested width ratio") {
    const Kernel k =
        build_kernel(KernelProfile::anisotropic_bump(mat_diag(4.0, 0.25)), 2, 33);
    CHECK(k.mass() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_FALSE(k.radial);
    const Vec w = k.directional_width();
    const double ratio = std::max(w[0], w[1]) / std::min(w[0], w[1]);
    // second-moment widths scale with the normalized shape diag(16, 1)
    CHECK(ratio == doctest::Approx(16.0).epsilon(0.05));
    for (size_t i = 0; i < k.nodes.size(); ++i)
        CHECK(norm(k.nodes[i], 2) < 1.0);
}

TEST_CASE("kernel build guards") {
    CHECK_THROWS_AS(build_kernel(KernelProfile::standard_bump(), 2, 16), ResolutionError);
    CHECK_THROWS_AS(build_kernel(KernelProfile::anisotropic_bump(mat_diag(1.0, -1.0)), 2, 17),
                    ParameterError);
    CHECK_THROWS_AS(build_kernel(KernelProfile::anisotropic_bump(mat_diag(0.0, 1.0)), 2, 17),
                    ParameterError);
}

TEST_CASE("self convolution: mass, evenness, moment doubling") {
    for (int dim : {1, 2}) {
        const Kernel rho = build_kernel(KernelProfile::standard_bump(true), dim, dim == 1 ? 65 : 25);
        const Kernel eta = self_convolve(rho);
        CHECK(eta.mass() == doctest::Approx(1.0).epsilon(1e-13));
        std::map<std::pair<double, double>, double> table;
        for (size_t i = 0; i < eta.nodes.size(); ++i)
            table[{eta.nodes[i][0], eta.nodes[i][1]}] = eta.values[i];
        for (size_t i = 0; i < eta.nodes.size(); ++i) {
            auto it = table.find({-eta.nodes[i][0], -eta.nodes[i][1]});
            REQUIRE(it != table.end());
            CHECK(it->second == doctest::Approx(eta.values[i]).epsilon(1e-12));
        }
        const Vec m_rho = rho.second_moment();
        const Vec m_eta = eta.second_moment();
        for (int a = 0; a < dim; ++a)
            CHECK(m_eta[a] == doctest::Approx(2.0 * m_rho[a]).epsilon(1e-10));
        // support inside the unit ball
        for (size_t i = 0; i < eta.nodes.size(); ++i) CHECK(norm(eta.nodes[i], dim) < 1.0);
    }
}

TEST_CASE("self convolution requires half support") {
    const Kernel rho = build_kernel(KernelProfile::standard_bump(false), 2, 17);
    CHECK_THROWS_AS(self_convolve(rho), PreconditionError);
}

TEST_CASE("kernel dump cross-checks against independent quadrature") {
    const Kernel k = build_kernel(KernelProfile::standard_bump(), 1, 129);
    std::stringstream ss;
    dump_kernel(ss, k);
    std::string line;
    std::getline(ss, line);  // header
    std::getline(ss, line);  // column comment
    double mass = 0.0, moment = 0.0;
    double z0, z1, v, g0, g1, w;
    while (ss >> z0 >> z1 >> v >> g0 >> g1 >> w) {
        mass += w * v;
        moment += w * v * z0 * z0;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
    // independent continuum second moment of the normalized 1D bump
    const double expect = oracle::integrate(
        [](double s) { return s * s * oracle::bump_profile_1d(s); }, -1.0, 1.0, 1024);
    CHECK(moment == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("analytic kernel gradients match difference quotients of the profile") {
    const Kernel k = build_kernel(KernelProfile::standard_bump(), 2, 17);
    // reconstruct the unnormalized profile at two nearby radii and compare
    // the stored gradient against a centered difference of the stored values
    // along the lattice axis (the values share one normalization constant)
    const double h = k.lattice_pitch;
    std::map<std::pair<double, double>, size_t> index;
    for (size_t i = 0; i < k.nodes.size(); ++i)
        index[{k.nodes[i][0], k.nodes[i][1]}] = i;
    int checked = 0;
    for (size_t i = 0; i < k.nodes.size() && checked < 50; ++i) {
        auto right = index.find({k.nodes[i][0] + h, k.nodes[i][1]});
        auto left = index.find({k.nodes[i][0] - h, k.nodes[i][1]});
        if (right == index.end() || left == index.end()) continue;
        if (norm(k.nodes[i], 2) > 0.8) continue;  // derivative is steep near the rim
        const double fd = (k.values[right->second] - k.values[left->second]) / (2.0 * h);
        CHECK(k.gradients[i][0] == doctest::Approx(fd).epsilon(0.02));
        ++checked;
    }
    CHECK(checked > 10);
}
