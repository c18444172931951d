#include "fluxlab/scenarios.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace fluxlab {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// periodic sawtooth with unit period and unit jump at half-integers
double sawtooth(double y) { return y - std::round(y); }

std::map<std::string, Scenario> build_registry() {
    std::map<std::string, Scenario> reg;

    {
        Scenario s;
        s.id = "flat_shear";
        s.dim = 2;
        s.domain_origin = {-1.0, -1.0};
        s.domain_extent = {2.0, 2.0};
        s.velocity = [](const Vec& x, double) { return vec2(sgn(x[1]), 0.0); };
        s.pressure = [](const Vec&) { return 0.0; };
        s.truth.dissipation_zero = true;
        s.truth.divergence_free = true;
        s.truth.has_jump_set = true;
        s.truth.smooth_probe = {0.25, 0.4};
        s.truth.jump_at = [](double t) {
            JumpProfile j;
            j.location = vec2(-0.5 + t, 0.0);
            j.nu = vec2(0.0, 1.0);
            j.u_plus = vec2(1.0, 0.0);
            j.u_minus = vec2(-1.0, 0.0);
            return j;
        };
        reg[s.id] = s;
    }
    {
        Scenario s;
        s.id = "sawtooth_shear";
        s.dim = 2;
        s.domain_origin = {-1.0, -1.0};
        s.domain_extent = {2.0, 2.0};
        s.velocity = [](const Vec& x, double) { return vec2(sawtooth(x[1]), 0.0); };
        s.pressure = [](const Vec&) { return 0.0; };
        s.truth.dissipation_zero = true;
        s.truth.divergence_free = true;
        s.truth.has_jump_set = true;
        s.truth.smooth_probe = {0.1, 0.2};
        s.truth.jump_at = [](double t) {
            JumpProfile j;
            j.location = vec2(-0.5 + t, 0.5);
            j.nu = vec2(0.0, 1.0);
            j.u_plus = vec2(-0.5, 0.0);
            j.u_minus = vec2(0.5, 0.0);
            return j;
        };
        reg[s.id] = s;
    }
    {
        Scenario s;
        s.id = "circular_vortex_sheet";
        s.dim = 2;
        s.domain_origin = {-2.0, -2.0};
        s.domain_extent = {4.0, 4.0};
        s.velocity = [](const Vec& x, double) {
            const double r2 = x[0] * x[0] + x[1] * x[1];
            if (r2 < 1.0) return vec2(-x[1], x[0]);
            return vec2(0.0, 0.0);
        };
        // radial momentum balance p'(r) = u_θ(r)²/r integrated in closed form
        s.pressure = [](const Vec& x) {
            const double r2 = x[0] * x[0] + x[1] * x[1];
            return r2 < 1.0 ? 0.5 * r2 : 0.5;
        };
        s.truth.dissipation_zero = true;
        s.truth.divergence_free = true;
        s.truth.has_jump_set = true;
        s.truth.smooth_probe = {0.35, 0.2};
        s.truth.jump_at = [](double t) {
            const double th = 2.0 * kPi * t;
            JumpProfile j;
            j.location = vec2(std::cos(th), std::sin(th));
            j.nu = vec2(std::cos(th), std::sin(th));
            j.u_plus = vec2(0.0, 0.0);
            j.u_minus = vec2(-std::sin(th), std::cos(th));
            return j;
        };
        reg[s.id] = s;
    }
    {
        Scenario s;
        s.id = "taylor_green";
        s.dim = 2;
        s.periodic = true;
        s.domain_origin = {0.0, 0.0};
        s.domain_extent = {2.0 * kPi, 2.0 * kPi};
        s.velocity = [](const Vec& x, double) {
            return vec2(std::sin(x[0]) * std::cos(x[1]), -std::cos(x[0]) * std::sin(x[1]));
        };
        s.pressure = [](const Vec& x) {
            return 0.25 * (std::cos(2.0 * x[0]) + std::cos(2.0 * x[1]));
        };
        s.truth.dissipation_zero = true;
        s.truth.divergence_free = true;
        s.truth.has_jump_set = false;
        s.truth.smooth_probe = {1.1, 2.3};
        reg[s.id] = s;
    }
    {
        Scenario s;
        s.id = "burgers_stationary_shock";
        s.dim = 1;
        s.domain_origin = {-2.0, 0.0};
        s.domain_extent = {4.0, 0.0};
        s.velocity = [](const Vec& x, double) { return vec1(x[0] < 0.0 ? 1.0 : -1.0); };
        s.truth.dissipation_zero = false;
        s.truth.divergence_free = false;
        s.truth.burgers = true;
        s.truth.has_jump_set = true;
        s.truth.smooth_probe = {-1.2, 0.0};
        s.truth.shock = ShockDescription{Rational(1), Rational(-1), Rational(0), +1,
                                         Rational(0), true};
        s.truth.jump_at = [](double) {
            JumpProfile j;
            j.location = vec1(0.0);
            j.nu = vec1(1.0);
            j.u_plus = vec1(-1.0);
            j.u_minus = vec1(1.0);
            return j;
        };
        reg[s.id] = s;
    }
    {
        Scenario s;
        s.id = "burgers_moving_shock";
        s.dim = 1;
        s.domain_origin = {-2.0, 0.0};
        s.domain_extent = {4.0, 0.0};
        s.velocity = [](const Vec& x, double t) {
            return vec1(x[0] < 0.5 * t ? 1.0 : 0.0);
        };
        s.truth.dissipation_zero = false;
        s.truth.divergence_free = false;
        s.truth.burgers = true;
        s.truth.stationary = false;
        s.truth.has_jump_set = true;
        s.truth.smooth_probe = {-1.2, 0.0};
        s.truth.shock = ShockDescription{Rational(1), Rational(0), Rational(1, 2), +1,
                                         Rational(0), true};
        s.truth.jump_at = [](double) {
            JumpProfile j;
            j.location = vec1(0.0);
            j.nu = vec1(1.0);
            j.u_plus = vec1(0.0);
            j.u_minus = vec1(1.0);
            return j;
        };
        reg[s.id] = s;
    }
    return reg;
}

const std::map<std::string, Scenario>& registry() {
    static const std::map<std::string, Scenario> reg = build_registry();
    return reg;
}

}  // namespace

const Scenario& find_scenario(const std::string& id) {
    const auto& reg = registry();
    auto it = reg.find(id);
    if (it == reg.end()) throw RegistryError("unknown scenario '" + id + "'");
    return it->second;
}

std::vector<std::string> scenario_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, s] : registry()) ids.push_back(id);
    return ids;
}

Grid scenario_grid(const Scenario& s, int n) {
    if (s.dim == 1) return Grid::line(s.domain_origin[0], s.domain_extent[0], n, s.periodic);
    return Grid::square(s.domain_origin[0], s.domain_origin[1], s.domain_extent[0],
                        s.domain_extent[1], n, n, s.periodic);
}

SampledField sample_velocity(const Scenario& s, const Grid& g, double t) {
    return sample_vector(g, [&](const Vec& x) { return s.velocity(x, t); }, t);
}

std::optional<SampledField> sample_pressure(const Scenario& s, const Grid& g) {
    if (!s.pressure) return std::nullopt;
    return sample_scalar(g, s.pressure);
}

AuditReport audit_scenario(const std::string& id, int n_per_axis) {
    const Scenario& s = find_scenario(id);
    AuditReport rep;
    rep.scenario = id;
    std::ostringstream detail;

    if (s.dim == 2) {
        const Grid g = scenario_grid(s, n_per_axis);
        const SampledField u = sample_velocity(s, g, 0.0);
        const auto p = sample_pressure(s, g);

        // weak divergence against a few bumps spread over the domain
        const double hx = 0.5 * s.domain_extent[0], hy = 0.5 * s.domain_extent[1];
        const Vec c{s.domain_origin[0] + hx, s.domain_origin[1] + hy};
        const std::vector<TestFunction> phis = {
            bump_test_function(2, c, vec2(0.8 * hx, 0.8 * hy)),
            bump_test_function(2, vec2(c[0] + 0.3 * hx, c[1] - 0.2 * hy),
                               vec2(0.4 * hx, 0.4 * hy)),
            coordinate_bump_test_function(2, 0, c, vec2(0.7 * hx, 0.7 * hy)),
        };
        for (const auto& phi : phis)
            rep.divergence_residual =
                std::max(rep.divergence_residual, std::abs(divergence_residual(u, phi)));

        // weak steady momentum: ∫ u⊗u : ∇(φ e_i) + p div(φ e_i) = 0
        double worst = 0.0;
        for (const auto& phi : phis) {
            for (int i = 0; i < 2; ++i) {
                double acc = 0.0;
                const int64_t n = g.num_points();
                for (int64_t q = 0; q < n; ++q) {
                    const Vec x = g.point(q);
                    const Vec gphi = phi.gradient(x);
                    const Vec uv = u.vector_value(q);
                    double t = uv[i] * (uv[0] * gphi[0] + uv[1] * gphi[1]);
                    if (p) t += p->values[q] * gphi[i];
                    acc += t;
                }
                worst = std::max(worst, std::abs(acc * g.cell_volume()));
            }
        }
        rep.momentum_residual = worst;

        const double dx = g.spacing[0];
        const bool div_ok = !s.truth.divergence_free || rep.divergence_residual < 5.0 * dx;
        const bool mom_ok = rep.momentum_residual < 5.0 * dx;
        rep.pass = div_ok && mom_ok;
        detail << "divergence " << rep.divergence_residual << ", momentum "
               << rep.momentum_residual << " (grid " << n_per_axis << ", dx " << dx << ")";
    } else {
        // Burgers lane: Rankine–Hugoniot plus defect-versus-weak-form agreement
        const ShockDescription& sh = *s.truth.shock;
        rep.rankine_hugoniot_ok = sh.speed == (sh.u_minus + sh.u_plus) / 2;
        const SignedMeasure1D defect = burgers_entropy_defect(sh);
        SpaceTimeTestFunction phi;
        phi.space = bump_test_function(1, vec1(to_double(sh.position)), vec1(0.5));
        phi.time = TimeProfile{0.0, 0.4};
        const double oracle = burgers_weak_residual(sh, phi);
        // the defect rate integrated along the (possibly moving) shock line
        double rate = 0.0;
        for (const auto& [loc, w] : defect.atoms) {
            (void)loc;
            rate += to_double(w);
        }
        const double spd = to_double(sh.speed), x0 = to_double(sh.position);
        double expected = 0.0;
        const int nt = 4096;
        const double t0 = phi.time.center - phi.time.radius;
        const double ht = 2.0 * phi.time.radius / nt;
        for (int i = 0; i < nt; ++i) {
            const double t = t0 + (i + 0.5) * ht;
            expected += phi.space(vec1(x0 + spd * t)) * phi.time(t);
        }
        expected *= rate * ht;
        rep.shock_rate_mismatch =
            std::abs(oracle - expected) / std::max(1e-12, std::abs(expected));
        rep.pass = rep.rankine_hugoniot_ok && rep.shock_rate_mismatch < 1e-6;
        detail << "RH " << (rep.rankine_hugoniot_ok ? "ok" : "violated")
               << ", defect-vs-oracle mismatch " << rep.shock_rate_mismatch;
    }
    rep.detail = detail.str();
    return rep;
}

}  // namespace fluxlab
