#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sffb/cli.hpp"
#include "sffb/types.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral form factor bounds on quantum dynamics"};
    app.set_version_flag("--version", sffb::cli::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a configured experiment and write CSV/JSON artifacts");
    run_cmd->add_option("config", config_path, "Path to the JSON config")->required();

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Validate the configured channel, projector set and bound");
    verify_cmd->add_option("config", config_path, "Path to the JSON config")->required();

    CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "Write a model spectrum as CSV");
    sffb::cli::ModelSpec model;
    std::string out_path;
    spectrum_cmd->add_option("--type", model.type, "Model type: syk | gue | spectrum_file | hamiltonian_file")
        ->required();
    spectrum_cmd->add_option("--N", model.n_sites, "syk: fermion sites");
    spectrum_cmd->add_option("--q", model.q, "syk: interaction order");
    spectrum_cmd->add_option("--J", model.j_scale, "syk: coupling scale");
    spectrum_cmd->add_option("--D", model.dim, "gue: dimension");
    spectrum_cmd->add_option("--seed", model.seed, "RNG seed");
    spectrum_cmd->add_option("--path", model.path, "file models: input path");
    spectrum_cmd->add_option("--out", out_path, "Output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return sffb::cli::run(sffb::cli::parse_config_file(config_path));
        if (verify_cmd->parsed())
            return sffb::cli::verify(sffb::cli::parse_config_file(config_path));
        if (spectrum_cmd->parsed()) return sffb::cli::export_spectrum(model, out_path);
    } catch (const sffb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sffb::cli::kExitValidationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sffb::cli::kExitValidationFailure;
    }
    return 0;
}
