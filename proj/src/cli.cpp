#include "sffb/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sffb/bounds.hpp"
#include "sffb/dynamics.hpp"
#include "sffb/io.hpp"
#include "sffb/projectors.hpp"
#include "sffb/rng.hpp"
#include "sffb/spectra.hpp"
#include "sffb/syk.hpp"

namespace sffb::cli {

using nlohmann::json;

namespace {

json canonical_json(const ExperimentConfig& c) {
    json j;
    j["model"]["type"] = c.model.type;
    if (c.model.type == "syk") {
        j["model"]["N"] = c.model.n_sites;
        j["model"]["q"] = c.model.q;
        j["model"]["J"] = c.model.j_scale;
        j["model"]["seed"] = c.model.seed;
    } else if (c.model.type == "gue") {
        j["model"]["D"] = c.model.dim;
        j["model"]["seed"] = c.model.seed;
    } else {
        j["model"]["path"] = c.model.path;
    }
    j["channel"]["type"] = c.channel.type;
    if (c.channel.type == "filtered") j["channel"]["weights_file"] = c.channel.weights_file;
    if (c.channel.type == "kraus") {
        j["channel"]["provider"] = c.channel.provider;
        if (c.channel.provider == "depolarizing") j["channel"]["gamma"] = c.channel.gamma;
        if (c.channel.provider == "random_constant") {
            j["channel"]["M"] = c.channel.kraus_count;
            j["channel"]["seed"] = c.channel.seed;
        }
    }
    j["projectors"]["type"] = c.projectors.type;
    if (c.projectors.type == "subsystem") {
        if (c.projectors.n_subsystem > 0) j["projectors"]["N_S"] = c.projectors.n_subsystem;
        if (c.projectors.subsystem_dim > 0) j["projectors"]["D_S"] = c.projectors.subsystem_dim;
    }
    if (c.projectors.type == "haar") {
        j["projectors"]["D_S"] = c.projectors.subsystem_dim;
        j["projectors"]["seed"] = c.projectors.seed;
    }
    if (c.projectors.type == "hadamard") j["projectors"]["seed"] = c.projectors.seed;
    if (c.projectors.type == "microcanonical") {
        j["projectors"]["E_lo"] = c.projectors.e_lo;
        j["projectors"]["E_hi"] = c.projectors.e_hi;
        j["projectors"]["group_size"] = c.projectors.group_size;
    }
    j["grid"] = {{"t_min", c.grid.t_min},
                 {"t_max", c.grid.t_max},
                 {"points", c.grid.points},
                 {"spacing", c.grid.spacing},
                 {"include_zero", c.grid.include_zero}};
    j["tolerances"] = {{"viol_tol", c.tolerances.viol_tol},
                       {"channel_tol", c.tolerances.channel_tol},
                       {"projector_tol", c.tolerances.projector_tol}};
    return j;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }

    auto require = [](const json& node, const char* key, const char* where) -> const json& {
        if (!node.contains(key))
            throw ConfigError(std::string(where) + " is missing required key '" + key + "'");
        return node.at(key);
    };

    ExperimentConfig c;
    const json& model = require(j, "model", "config");
    c.model.type = require(model, "type", "model").get<std::string>();
    if (c.model.type == "syk") {
        c.model.n_sites = require(model, "N", "syk model").get<int>();
        c.model.q = require(model, "q", "syk model").get<int>();
        c.model.j_scale = require(model, "J", "syk model").get<double>();
        c.model.seed = model.value("seed", 1ULL);
    } else if (c.model.type == "gue") {
        c.model.dim = require(model, "D", "gue model").get<int>();
        c.model.seed = model.value("seed", 1ULL);
    } else if (c.model.type == "spectrum_file" || c.model.type == "hamiltonian_file") {
        c.model.path = require(model, "path", "file model").get<std::string>();
    } else {
        throw ConfigError("unknown model type '" + c.model.type + "'");
    }

    const json& channel = require(j, "channel", "config");
    c.channel.type = require(channel, "type", "channel").get<std::string>();
    if (c.channel.type == "filtered") {
        c.channel.weights_file = require(channel, "weights_file", "filtered channel");
    } else if (c.channel.type == "kraus") {
        c.channel.provider = require(channel, "provider", "kraus channel").get<std::string>();
        if (c.channel.provider == "depolarizing") {
            c.channel.gamma = channel.value("gamma", 1.0);
        } else if (c.channel.provider == "random_constant") {
            c.channel.kraus_count = channel.value("M", 4);
            c.channel.seed = channel.value("seed", 1ULL);
        } else {
            throw ConfigError("unknown kraus provider '" + c.channel.provider + "'");
        }
    } else if (c.channel.type != "unitary") {
        throw ConfigError("unknown channel type '" + c.channel.type + "'");
    }

    const json& projectors = require(j, "projectors", "config");
    c.projectors.type = require(projectors, "type", "projectors").get<std::string>();
    if (c.projectors.type == "subsystem") {
        c.projectors.n_subsystem = projectors.value("N_S", 0);
        c.projectors.subsystem_dim = projectors.value("D_S", 0);
        if (c.projectors.n_subsystem <= 0 && c.projectors.subsystem_dim <= 0)
            throw ConfigError("subsystem projectors need N_S (sites) or D_S (dimension)");
    } else if (c.projectors.type == "haar") {
        c.projectors.subsystem_dim = require(projectors, "D_S", "haar projectors").get<int>();
        c.projectors.seed = projectors.value("seed", 1ULL);
    } else if (c.projectors.type == "hadamard") {
        c.projectors.seed = projectors.value("seed", 1ULL);
    } else if (c.projectors.type == "microcanonical") {
        c.projectors.e_lo = require(projectors, "E_lo", "microcanonical projectors").get<double>();
        c.projectors.e_hi = require(projectors, "E_hi", "microcanonical projectors").get<double>();
        c.projectors.group_size = projectors.value("group_size", 1);
        if (c.projectors.group_size < 1) throw ConfigError("group_size must be >= 1");
    } else if (c.projectors.type != "dft") {
        throw ConfigError("unknown projector type '" + c.projectors.type + "'");
    }
    c.projectors.perturbation = projectors.value("perturbation", 0.0);

    const json& grid = require(j, "grid", "config");
    c.grid.t_min = require(grid, "t_min", "grid").get<double>();
    c.grid.t_max = require(grid, "t_max", "grid").get<double>();
    c.grid.points = require(grid, "points", "grid").get<int>();
    c.grid.spacing = grid.value("spacing", std::string("linear"));
    c.grid.include_zero = grid.value("include_zero", false);
    if (c.grid.points < 2) throw ConfigError("grid needs at least 2 points");
    if (c.grid.spacing != "linear" && c.grid.spacing != "log")
        throw ConfigError("grid spacing must be 'linear' or 'log'");

    if (j.contains("outputs")) {
        const json& outputs = j.at("outputs");
        c.outputs.directory = outputs.value("directory", std::string());
        if (outputs.contains("series"))
            c.outputs.series = outputs.at("series").get<std::vector<std::string>>();
        if (outputs.contains("per_state"))
            c.outputs.per_state = outputs.at("per_state").get<std::vector<int>>();
        if (outputs.contains("cross"))
            for (const auto& pair : outputs.at("cross"))
                c.outputs.cross.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
        c.outputs.dump_couplings = outputs.value("couplings", false);
        c.outputs.export_projectors = outputs.value("projectors", false);
    }

    if (j.contains("analysis")) {
        const json& analysis = j.at("analysis");
        if (analysis.contains("scrambling_dims"))
            c.analysis.scrambling_dims = analysis.at("scrambling_dims").get<std::vector<int>>();
        if (analysis.contains("powerlaw")) {
            c.analysis.powerlaw = true;
            c.analysis.powerlaw_t_lo = analysis.at("powerlaw").at("t_lo").get<double>();
            c.analysis.powerlaw_t_hi = analysis.at("powerlaw").at("t_hi").get<double>();
        }
    }

    if (j.contains("tolerances")) {
        const json& tol = j.at("tolerances");
        c.tolerances.viol_tol = tol.value("viol_tol", 1e-10);
        c.tolerances.channel_tol = tol.value("channel_tol", 1e-8);
        c.tolerances.projector_tol = tol.value("projector_tol", 1e-9);
    }

    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

namespace {

struct BuiltExperiment {
    SpectralDecomposition spec;           // model spectrum (sorted)
    std::optional<SykModel> syk;          // retained for syk models
    std::optional<QuantumChannel> channel;
    ProjectorSet set;
    RealVector times;
    RealSeries k;                         // reference SFF for the bound
    bool microcanonical = false;
};

SpectralDecomposition build_model_spectrum(const ModelSpec& model,
                                           std::optional<SykModel>& syk_out) {
    if (model.type == "syk") {
        SykModel syk = build_syk_model(model.n_sites, model.q, model.j_scale, model.seed);
        SpectralDecomposition spec = diagonalize(syk.hamiltonian);
        syk_out = std::move(syk);
        return spec;
    }
    if (model.type == "gue") {
        if (model.dim <= 0) throw ConfigError("gue model needs D > 0");
        return diagonalize(gue_hamiltonian(model.dim, model.seed));
    }
    if (model.type == "spectrum_file")
        return decomposition_from_eigenvalues(read_spectrum_csv(model.path));
    if (model.type == "hamiltonian_file") return diagonalize(read_matrix_csv(model.path));
    throw ConfigError("unknown model type '" + model.type + "'");
}

// Weyl unitary basis W_ab = X^a Z^b on dimension d.
std::vector<Matrix> weyl_basis(int d) {
    Matrix shift = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) shift((i + 1) % d, i) = 1.0;
    Vector clock_diag(d);
    for (int i = 0; i < d; ++i) {
        const double arg = 2.0 * std::numbers::pi * i / static_cast<double>(d);
        clock_diag[i] = cxd(std::cos(arg), std::sin(arg));
    }
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(d) * d);
    Matrix x_power = Matrix::Identity(d, d);
    for (int a = 0; a < d; ++a) {
        Matrix w = x_power;
        for (int b = 0; b < d; ++b) {
            basis.push_back(w);
            w = w * clock_diag.asDiagonal();
        }
        x_power = shift * x_power;
    }
    return basis;
}

QuantumChannel build_channel(const ChannelSpec& channel, const SpectralDecomposition& spec) {
    if (channel.type == "unitary") return QuantumChannel::unitary(spec);
    if (channel.type == "filtered") {
        RealVector weights = read_weights_file(channel.weights_file, spec.dimension());
        return QuantumChannel::filtered_unitary(spec, std::move(weights));
    }
    if (channel.type == "kraus") {
        const int d = spec.dimension();
        if (channel.provider == "random_constant") {
            auto kraus = random_kraus_set(d, channel.kraus_count, channel.seed);
            return QuantumChannel::general(
                d, channel.kraus_count, [kraus](double) { return kraus; }, true);
        }
        if (channel.provider == "depolarizing") {
            if (d > 32)
                throw DimensionTooLarge("depolarizing provider guarded at D <= 32 (M = D^2)");
            // Unitary evolution with rate-gamma global depolarizing noise:
            // A_00 = sqrt(1 - p (D^2-1)/D^2) U(t), A_ab = sqrt(p)/D W_ab U(t).
            const auto basis = weyl_basis(d);
            const double gamma = channel.gamma;
            const SpectralDecomposition spec_copy = spec;
            auto provider = [basis, gamma, spec_copy, d](double t) {
                const Matrix u = unitary_at(spec_copy, t);
                const double p = 1.0 - std::exp(-gamma * t);
                std::vector<Matrix> kraus;
                kraus.reserve(basis.size());
                const double dd = static_cast<double>(d) * d;
                kraus.push_back(std::sqrt(1.0 - p * (dd - 1.0) / dd) * u);
                const double amp = std::sqrt(p) / d;
                for (std::size_t r = 1; r < basis.size(); ++r)
                    kraus.push_back(amp * (basis[r] * u));
                return kraus;
            };
            return QuantumChannel::general(d, d * d, std::move(provider), true);
        }
        throw ConfigError("unknown kraus provider '" + channel.provider + "'");
    }
    throw ConfigError("unknown channel type '" + channel.type + "'");
}

int integer_log2(int value) {
    int bits = 0;
    while ((1 << bits) < value) ++bits;
    if ((1 << bits) != value) return -1;
    return bits;
}

ProjectorSet build_projector_set(const ProjectorSpec& pspec, const SpectralDecomposition& spec,
                                 const std::optional<SykModel>& syk) {
    const int d = spec.dimension();
    if (pspec.type == "subsystem") {
        if (syk) {
            const int n_s = pspec.n_subsystem > 0 ? pspec.n_subsystem
                                                  : integer_log2(pspec.subsystem_dim);
            if (n_s < 0) throw ConfigError("subsystem D_S must be a power of 2 for syk models");
            return subsystem_fock_projectors(*syk, n_s);
        }
        int d_s = pspec.subsystem_dim;
        if (d_s <= 0 && pspec.n_subsystem > 0) d_s = 1 << pspec.n_subsystem;
        if (d_s <= 0 || d % d_s != 0)
            throw DimensionMismatch("subsystem dimension must divide D = " + std::to_string(d));
        return subsystem_basis_projectors(d_s, d / d_s);
    }
    if (pspec.type == "haar") {
        if (pspec.subsystem_dim <= 0 || d % pspec.subsystem_dim != 0)
            throw DimensionMismatch("haar D_S must divide D = " + std::to_string(d));
        return haar_random_subsystem_projectors(pspec.subsystem_dim, d / pspec.subsystem_dim,
                                                pspec.seed);
    }
    if (pspec.type == "dft") return dft_eigenbasis_states(spec);
    if (pspec.type == "hadamard")
        return hadamard_eigenbasis_states(spec, random_complex_hadamard(d, pspec.seed));
    if (pspec.type == "microcanonical") {
        const std::vector<int> window = eigenindices_in_window(spec, pspec.e_lo, pspec.e_hi);
        if (window.empty()) throw EmptyWindow("no eigenvalues in the configured window");
        std::vector<std::vector<int>> partition;
        for (std::size_t start = 0; start < window.size(); start += pspec.group_size) {
            std::vector<int> group;
            for (std::size_t i = start; i < std::min(window.size(), start + pspec.group_size); ++i)
                group.push_back(window[i]);
            partition.push_back(std::move(group));
        }
        return microcanonical_projectors(spec, pspec.e_lo, pspec.e_hi, partition);
    }
    throw ConfigError("unknown projector type '" + pspec.type + "'");
}

RealVector build_grid(const GridSpec& grid) {
    if (grid.spacing == "linear") return linspace(grid.t_min, grid.t_max, grid.points);
    RealVector t = logspace(grid.t_min, grid.t_max, grid.points);
    if (!grid.include_zero) return t;
    RealVector with_zero(t.size() + 1);
    with_zero[0] = 0.0;
    with_zero.tail(t.size()) = t;
    return with_zero;
}

BuiltExperiment build_experiment(const ExperimentConfig& config) {
    BuiltExperiment built;
    built.spec = build_model_spectrum(config.model, built.syk);
    built.channel = build_channel(config.channel, built.spec);
    built.set = build_projector_set(config.projectors, built.spec, built.syk);
    if (config.projectors.perturbation > 0.0) {
        GaussianStream noise(config.projectors.seed ^ 0x9e3779b97f4a7c15ULL);
        for (Matrix& v : built.set.isometries)
            for (Eigen::Index j = 0; j < v.cols(); ++j)
                for (Eigen::Index i = 0; i < v.rows(); ++i)
                    v(i, j) += config.projectors.perturbation * noise.next_complex();
    } else if (config.projectors.perturbation < 0.0) {
        for (Matrix& v : built.set.isometries) v *= 1.0 + config.projectors.perturbation;
    }
    built.times = build_grid(config.grid);
    built.microcanonical = config.projectors.type == "microcanonical";

    if (built.microcanonical) {
        if (config.channel.type != "unitary")
            throw ConfigError("microcanonical projectors require a unitary channel");
        // The bound lives on the windowed subspace: compare against the
        // SFF of the windowed spectrum.
        const std::vector<int> window =
            eigenindices_in_window(built.spec, config.projectors.e_lo, config.projectors.e_hi);
        RealVector windowed(window.size());
        for (std::size_t i = 0; i < window.size(); ++i)
            windowed[i] = built.spec.eigenvalues[window[i]];
        built.k = sff_from_spectrum(decomposition_from_eigenvalues(std::move(windowed)),
                                    built.times);
    } else {
        built.k = generalized_sff(*built.channel, built.times);
    }
    return built;
}

std::string resolve_output_directory(const OutputSpec& outputs) {
    if (!outputs.directory.empty()) return outputs.directory;
    if (const char* env = std::getenv(kOutputDirEnvVar); env && *env) return env;
    return "sffb_out";
}

}  // namespace

int run(const ExperimentConfig& config) {
    const BuiltExperiment built = build_experiment(config);
    const std::string out_dir = resolve_output_directory(config.outputs);
    std::filesystem::create_directories(out_dir);

    const json config_echo = canonical_json(config);
    const std::string hash = fnv1a_hex(config_echo.dump());

    const RealSeries p_s = mean_return_probability(*built.channel, built.set, built.times);
    const BoundReport report = verify_speed_limit(p_s, built.k, config.tolerances.viol_tol);

    std::vector<std::string> names;
    std::vector<RealVector> columns;
    for (const std::string& requested : config.outputs.series) {
        if (requested == "K") {
            names.push_back("K");
            columns.push_back(report.k);
        } else if (requested == "P_S") {
            names.push_back("P_S");
            columns.push_back(report.p_s);
        } else if (requested == "margin") {
            names.push_back("margin");
            columns.push_back(report.margin);
        } else {
            throw ConfigError("unknown series '" + requested + "' (expected K, P_S, margin)");
        }
    }
    for (int idx : config.outputs.per_state) {
        names.push_back("P_" + std::to_string(idx));
        columns.push_back(per_state_return(*built.channel, built.set, idx, built.times).values);
    }
    for (const auto& [k_idx, j_idx] : config.outputs.cross) {
        names.push_back("Q_" + std::to_string(k_idx) + "_" + std::to_string(j_idx));
        columns.push_back(
            cross_overlap(*built.channel, built.set, k_idx, j_idx, built.times).values);
    }
    write_series_csv(out_dir + "/series.csv", names, built.times, columns, hash);
    if (config.outputs.dump_couplings && built.syk)
        write_couplings_csv(out_dir + "/couplings.csv", built.syk->couplings, hash);
    if (config.outputs.export_projectors) {
        json provenance;
        provenance["label"] = built.set.label;
        provenance["D"] = built.set.total_dim;
        provenance["subspace_dim"] = built.set.subspace_dim;
        provenance["dims"] = built.set.dims;
        provenance["config"] = config_echo["projectors"];
        provenance["manifest"] = hash;
        export_projector_set(out_dir + "/projectors", built.set, provenance.dump(2));
    }

    json summary;
    summary["manifest"] = hash;
    summary["min_margin"] = report.min_margin;
    summary["violated"] = report.violated;
    summary["max_abs_deviation"] = report.margin.cwiseAbs().maxCoeff();
    summary["D"] = built.spec.dimension();
    summary["D_S"] = built.set.count();
    summary["subspace_dim"] = built.set.subspace_dim;

    for (int d_s : config.analysis.scrambling_dims) {
        json entry;
        entry["D_S"] = d_s;
        if (built.times[0] > 0.0) {
            entry["t_s"] = nullptr;
            entry["note"] = "grid does not start at t = 0";
        } else {
            const auto t_s =
                sustained_scrambling_time(built.k, d_s, built.times[built.times.size() - 1]);
            if (t_s)
                entry["t_s"] = *t_s;
            else
                entry["t_s"] = nullptr;
        }
        summary["sustained_scrambling"].push_back(entry);
    }

    if (config.analysis.powerlaw) {
        const PowerLawFit fit =
            powerlaw_fit(built.k, config.analysis.powerlaw_t_lo, config.analysis.powerlaw_t_hi);
        summary["powerlaw"] = {{"exponent", fit.exponent},
                               {"prefactor", fit.prefactor},
                               {"r2", fit.r2},
                               {"points_used", fit.points_used},
                               {"t_lo", config.analysis.powerlaw_t_lo},
                               {"t_hi", config.analysis.powerlaw_t_hi}};
    }

    {
        std::ofstream out(out_dir + "/summary.json");
        out << summary.dump(2) << "\n";
    }
    {
        json manifest;
        manifest["version"] = kVersion;
        manifest["rng"] = kRngVersion;
        manifest["hash"] = hash;
        manifest["config"] = config_echo;
        std::ofstream out(out_dir + "/manifest.json");
        out << manifest.dump(2) << "\n";
    }

    if (report.violated) {
        std::cerr << "bound violation: min margin " << report.min_margin << "\n";
        return kExitBoundViolation;
    }
    return kExitOk;
}

int verify(const ExperimentConfig& config) {
    const BuiltExperiment built = build_experiment(config);

    // A handful of sample times is enough for the channel contract.
    const int samples = std::min<int>(8, static_cast<int>(built.times.size()));
    RealVector sample_times(samples);
    for (int i = 0; i < samples; ++i)
        sample_times[i] = built.times[i * (built.times.size() - 1) / std::max(1, samples - 1)];

    bool ok = true;
    const ChannelReport channel_report =
        validate_channel(*built.channel, sample_times, config.tolerances.channel_tol);
    std::cout << "channel: max |sum A^dag A - 1| = " << channel_report.max_identity_deviation
              << (channel_report.trace_preserving_observed ? " (trace preserving)"
                                                           : " (not trace preserving)")
              << "\n";
    if (channel_report.trace_preserving_claimed && !channel_report.trace_preserving_observed)
        ok = false;

    const ProjectorSetReport set_report =
        validate_projector_set(built.set, config.tolerances.projector_tol);
    std::cout << "projectors: isometry " << set_report.max_isometry_residual << ", orthogonality "
              << set_report.max_orthogonality_residual << ", completeness "
              << set_report.completeness_residual << (set_report.pass ? " (pass)" : " (FAIL)")
              << "\n";
    if (!set_report.pass) ok = false;

    if (!ok) return kExitValidationFailure;

    const RealSeries p_s = mean_return_probability(*built.channel, built.set, built.times);
    const BoundReport bound = verify_speed_limit(p_s, built.k, config.tolerances.viol_tol);
    std::cout << "bound: min margin = " << bound.min_margin << "\n";
    if (bound.margin.cwiseAbs().maxCoeff() < 1e-15 && bound.k.minCoeff() > 1.0 - 1e-12)
        std::cout << "note: K and P_S are both identically 1 on this grid\n";
    if (bound.violated) {
        std::cerr << "bound violation: min margin " << bound.min_margin << "\n";
        return kExitBoundViolation;
    }
    return kExitOk;
}

int export_spectrum(const ModelSpec& model, const std::string& out_path) {
    std::optional<SykModel> syk;
    const SpectralDecomposition spec = build_model_spectrum(model, syk);
    write_spectrum_csv(out_path, spec.eigenvalues);
    return kExitOk;
}

}  // namespace sffb::cli
