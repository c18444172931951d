/// @file experiment.hpp
/// @brief Experiment configuration, orchestration of scans and
/// classifications, verdicts against scenario ground truth, and result
/// emission. Deterministic given (config, seed).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fluxlab/flux.hpp"
#include "fluxlab/scenarios.hpp"

namespace fluxlab {

struct ExperimentConfig {
    std::string scenario = "flat_shear";
    int grid_n = 256;
    std::string kernel_profile = "standard";  // standard | standard-half | aniso:a,b,c,d
    int kernel_resolution = 17;
    double ladder_max = 0.25;
    int ladder_count = 4;  // geometric, ratio 2
    std::vector<std::string> flux_kinds{"cet", "dr"};
    std::string test_function = "offset";  // centered | offset | coordinate
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::string format = "csv";  // csv | text

    static ExperimentConfig from_json_file(const std::string& path);
};

struct Verdict {
    std::string claim;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct ReportBundle {
    ExperimentConfig config;
    std::vector<FluxScan> scans;
    std::vector<Verdict> verdicts;
    std::string classification_report;
    bool all_pass() const;
};

/// Builds the scenario on the configured grid (after its audit), runs the
/// requested flux scans, classifies the scenario's probe points, and grades
/// every ground-truth claim. Any stage error is rethrown with the stage
/// named; partial results stay in the bundle.
ReportBundle run_experiment(const ExperimentConfig& cfg);

/// Writes scans (CSV or structured text), the classification report and a
/// summary with one line per verdict. Byte-stable across reruns.
void emit_results(const ReportBundle& bundle, const std::string& out_dir,
                  const std::string& format);

/// Kernel from a profile spec string ("standard", "standard-half",
/// "aniso:a11,a12,a21,a22" with optional "-half").
Kernel kernel_from_spec(const std::string& spec, int dim, int resolution);

/// Named test-function library, sized to fit the scan window at ℓ_max.
TestFunction scenario_test_function(const Scenario& s, const std::string& name,
                                    double ladder_max);

std::vector<double> geometric_ladder(double max, int count);

}  // namespace fluxlab
