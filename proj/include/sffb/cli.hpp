#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sffb/types.hpp"

namespace sffb::cli {

inline constexpr const char* kVersion = "sffbounds 0.1.0";

/// Default output directory when the config gives none.
inline constexpr const char* kOutputDirEnvVar = "SFFB_OUT_DIR";

struct ModelSpec {
    std::string type;  // syk | gue | spectrum_file | hamiltonian_file
    int n_sites = 10;  // syk
    int q = 4;
    double j_scale = 1.0;
    int dim = 0;  // gue
    std::uint64_t seed = 1;
    std::string path;  // spectrum_file / hamiltonian_file
};

struct ChannelSpec {
    std::string type;  // unitary | filtered | kraus
    std::string weights_file;
    std::string provider;  // depolarizing | random_constant
    double gamma = 1.0;    // depolarizing rate
    int kraus_count = 4;   // random_constant
    std::uint64_t seed = 1;
};

struct ProjectorSpec {
    std::string type;  // subsystem | hadamard | dft | haar | microcanonical
    int n_subsystem = 0;  // subsystem (syk sites) or log2 D_S when applicable
    int subsystem_dim = 0;  // explicit D_S for non-syk subsystem/haar specs
    std::uint64_t seed = 1;
    double e_lo = 0.0, e_hi = 0.0;  // microcanonical window
    int group_size = 1;             // microcanonical partition granularity
    // Fault-injection knob for testing the validators: positive values add
    // complex Gaussian noise of that scale, negative values shrink every
    // isometry by (1 + perturbation).
    double perturbation = 0.0;
};

struct GridSpec {
    double t_min = 0.0;
    double t_max = 1.0;
    int points = 2;
    std::string spacing = "linear";  // linear | log
    bool include_zero = false;       // prepend t = 0 to a log grid
};

struct OutputSpec {
    std::string directory;
    std::vector<std::string> series = {"K", "P_S", "margin"};
    std::vector<int> per_state;                    // P_k indices
    std::vector<std::pair<int, int>> cross;        // Q_kj index pairs
    bool dump_couplings = false;                   // syk models only
    bool export_projectors = false;                // manifest + isometry dumps
};

struct AnalysisSpec {
    std::vector<int> scrambling_dims;  // D_S thresholds for t_s
    bool powerlaw = false;
    double powerlaw_t_lo = 0.0, powerlaw_t_hi = 0.0;
};

struct ToleranceSpec {
    double viol_tol = 1e-10;
    double channel_tol = 1e-8;
    double projector_tol = 1e-9;
};

struct ExperimentConfig {
    ModelSpec model;
    ChannelSpec channel;
    ProjectorSpec projectors;
    GridSpec grid;
    OutputSpec outputs;
    AnalysisSpec analysis;
    ToleranceSpec tolerances;
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_json(const std::string& json_text);

// Exit codes shared by run and verify.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitBoundViolation = 2;

/// Builds the configured objects, sweeps the grid, writes series CSVs, a
/// summary JSON and a provenance manifest under the output directory.
int run(const ExperimentConfig& config);

/// Runs the invariant suite (channel, projector set, bound check) on the
/// configured objects without writing series.
int verify(const ExperimentConfig& config);

/// Builds just the model spectrum and writes it as CSV.
int export_spectrum(const ModelSpec& model, const std::string& out_path);

}  // namespace sffb::cli
