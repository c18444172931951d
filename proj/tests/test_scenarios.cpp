#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fluxlab/experiment.hpp"
#include "oracles.hpp"

using namespace fluxlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("registry lists the six scenarios") {
    const auto ids = scenario_ids();
    REQUIRE(ids.size() == 6);
    for (const char* id :
         {"flat_shear", "circular_vortex_sheet", "taylor_green", "burgers_stationary_shock",
          "burgers_moving_shock", "sawtooth_shear"})
        CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
    CHECK_THROWS_AS(find_scenario("nope"), RegistryError);
}

TEST_CASE("every scenario passes its reference audit") {
    for (const std::string& id : scenario_ids()) {
        const AuditReport rep = audit_scenario(id, 512);
        INFO(id, ": ", rep.detail);
        CHECK(rep.pass);
        CHECK(rep.rankine_hugoniot_ok);
    }
}

TEST_CASE("audit residuals shrink with resolution") {
    const AuditReport coarse = audit_scenario("circular_vortex_sheet", 256);
    const AuditReport fine = audit_scenario("circular_vortex_sheet", 512);
    CHECK(fine.divergence_residual <= std::max(0.8 * coarse.divergence_residual, 1e-12));
    CHECK(fine.momentum_residual <= std::max(0.8 * coarse.momentum_residual, 1e-12));
}

TEST_CASE("scenario sampling matches the declared fields") {
    const Scenario& s = find_scenario("circular_vortex_sheet");
    const Grid g = scenario_grid(s, 128);
    const SampledField u = sample_velocity(s, g, 0.0);
    const auto p = sample_pressure(s, g);
    REQUIRE(p.has_value());
    // inside: rigid rotation and p = r²/2; outside: rest and p = 1/2
    const int64_t q_in = g.flat_index(64, 64);
    const Vec x_in = g.point(q_in);
    CHECK(u.vector_value(q_in)[0] == doctest::Approx(-x_in[1]));
    CHECK(p->value(q_in) ==
          doctest::Approx(0.5 * (x_in[0] * x_in[0] + x_in[1] * x_in[1])));
    const int64_t q_out = g.flat_index(5, 5);
    CHECK(u.vector_value(q_out)[0] == 0.0);
    CHECK(p->value(q_out) == 0.5);
}

TEST_CASE("kernel specs parse") {
    CHECK(kernel_from_spec("standard", 2, 17).radial);
    CHECK(kernel_from_spec("standard-half", 2, 17).half_support);
    const Kernel a = kernel_from_spec("aniso:2,0,0,0.5", 2, 17);
    CHECK_FALSE(a.radial);
    CHECK_THROWS_AS(kernel_from_spec("squircle", 2, 17), InputError);
    CHECK_THROWS_AS(kernel_from_spec("aniso:1,2", 2, 17), InputError);
}

TEST_CASE("run_experiment on the flat shear layer: pass verdicts, zero pairings") {
    ExperimentConfig cfg;
    cfg.scenario = "flat_shear";
    cfg.grid_n = 128;
    cfg.ladder_max = 0.25;
    cfg.ladder_count = 3;
    cfg.flux_kinds = {"dr", "cet"};
    const ReportBundle bundle = run_experiment(cfg);
    REQUIRE(bundle.scans.size() == 2);
    for (const FluxScan& s : bundle.scans)
        for (double p : s.pairings) CHECK(std::abs(p) < 1e-10);
    for (const Verdict& v : bundle.verdicts) {
        INFO(v.claim, ": ", v.detail);
        CHECK(v.pass);
    }
    CHECK(bundle.all_pass());
}

TEST_CASE("run_experiment grades the Burgers shock against the oracle") {
    ExperimentConfig cfg;
    cfg.scenario = "burgers_stationary_shock";
    cfg.grid_n = 2048;
    cfg.ladder_max = 0.5;
    cfg.ladder_count = 4;
    cfg.flux_kinds = {"dr"};
    const ReportBundle bundle = run_experiment(cfg);
    REQUIRE(bundle.scans.size() == 1);
    for (const Verdict& v : bundle.verdicts) {
        INFO(v.claim, ": ", v.detail);
        CHECK(v.pass);
    }
}

TEST_CASE("verdicts are monotone in resolution for the Burgers scan") {
    // the extrapolation error against the analytic oracle must not grow
    // when the grid is refined
    auto err = [](int n) {
        ExperimentConfig cfg;
        cfg.scenario = "burgers_stationary_shock";
        cfg.grid_n = n;
        cfg.ladder_max = 0.5;
        cfg.ladder_count = 4;
        cfg.flux_kinds = {"dr"};
        const ReportBundle b = run_experiment(cfg);
        const Scenario& s = find_scenario("burgers_stationary_shock");
        const TestFunction phi = scenario_test_function(s, cfg.test_function, cfg.ladder_max);
        SpaceTimeTestFunction st{phi, TimeProfile{0.0, 0.4}};
        const double expected = burgers_weak_residual(*s.truth.shock, st);
        return std::abs(b.scans.front().extrapolated - expected);
    };
    const double coarse = err(1024);
    const double fine = err(2048);
    CHECK(fine <= coarse * 1.2 + 1e-12);
}

TEST_CASE("emit_results writes byte-stable outputs") {
    namespace fs = std::filesystem;
    ExperimentConfig cfg;
    cfg.scenario = "flat_shear";
    cfg.grid_n = 128;
    cfg.ladder_max = 0.25;
    cfg.ladder_count = 3;
    cfg.flux_kinds = {"dr"};
    const ReportBundle bundle = run_experiment(cfg);
    const fs::path dir1 = fs::temp_directory_path() / "fluxlab_emit_a";
    const fs::path dir2 = fs::temp_directory_path() / "fluxlab_emit_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    emit_results(bundle, dir1.string(), "csv");
    emit_results(bundle, dir2.string(), "csv");
    for (const char* name : {"flat_shear_scans.csv", "flat_shear_summary.txt"}) {
        const std::string a = slurp((dir1 / name).string());
        const std::string b = slurp((dir2 / name).string());
        CHECK(!a.empty());
        CHECK(a == b);
    }
    // empty bundle still yields header-only files
    ReportBundle empty;
    empty.config = cfg;
    emit_results(empty, dir1.string(), "csv");
    const std::string hdr = slurp((dir1 / "flat_shear_scans.csv").string());
    CHECK(hdr.find("kind,scenario,kernel") != std::string::npos);
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("experiment errors name the failing stage") {
    ExperimentConfig cfg;
    cfg.scenario = "flat_shear";
    cfg.grid_n = 64;
    cfg.ladder_max = 0.02;  // below 4Δx
    cfg.ladder_count = 2;
    cfg.flux_kinds = {"dr"};
    try {
        run_experiment(cfg);
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("stage 'scan'") != std::string::npos);
    }
}
