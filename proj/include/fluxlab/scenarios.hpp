/// @file scenarios.hpp
/// @brief Registry of analytic weak solutions with known dissipation, plus
/// the self-consistency audit every scenario must pass before use.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fluxlab/bv1d.hpp"
#include "fluxlab/grid.hpp"
#include "fluxlab/local_structure.hpp"

namespace fluxlab {

struct ScenarioTruth {
    bool dissipation_zero = true;
    bool divergence_free = true;
    bool burgers = false;
    bool stationary = true;
    bool has_jump_set = false;
    std::optional<ShockDescription> shock;  // Burgers scenarios
    /// Ground-truth jump profile along the jump set, parameter in [0,1).
    std::function<JumpProfile(double)> jump_at;
    /// An interior point with a Lebesgue (smooth) blow-up, for classifier checks.
    Vec smooth_probe{0.0, 0.0};
};

struct Scenario {
    std::string id;
    int dim = 2;
    bool periodic = false;
    Vec domain_origin{0.0, 0.0};
    Vec domain_extent{1.0, 1.0};
    std::function<Vec(const Vec&, double)> velocity;
    std::function<double(const Vec&)> pressure;  // null for Burgers scenarios
    ScenarioTruth truth;
};

/// ids: flat_shear, circular_vortex_sheet, taylor_green,
/// burgers_stationary_shock, burgers_moving_shock, sawtooth_shear.
const Scenario& find_scenario(const std::string& id);  // throws RegistryError
std::vector<std::string> scenario_ids();

Grid scenario_grid(const Scenario& s, int n_per_axis);
SampledField sample_velocity(const Scenario& s, const Grid& g, double t = 0.0);
std::optional<SampledField> sample_pressure(const Scenario& s, const Grid& g);

struct AuditReport {
    std::string scenario;
    bool pass = false;
    double divergence_residual = 0.0;  // worst over the probe test functions
    double momentum_residual = 0.0;    // weak steady momentum balance
    bool rankine_hugoniot_ok = true;
    double shock_rate_mismatch = 0.0;  // defect vs independent weak-form oracle
    std::string detail;
};

/// Self-consistency audit on an n-per-axis reference grid: weak divergence,
/// weak momentum balance against the declared pressure, Rankine–Hugoniot and
/// defect-versus-oracle agreement for Burgers shocks.
AuditReport audit_scenario(const std::string& id, int n_per_axis = 512);

}  // namespace fluxlab
