// fiberdd: entanglement of a fiber-propagated photon pair under 1/f^alpha
// dephasing with spin-echo / CPMG waveplate sequences.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "fiberdd/harness.hpp"

namespace {

using fiberdd::SimulationConfig;

struct Flag {
    const char* name;
    const char* help;
};

// Long flags that map one-to-one onto configuration keys.
constexpr Flag kSettingFlags[] = {
    {"sequence", "Pulse sequence: free | se | cpmg"},
    {"pulses", "CPMG with this many pulses over the whole length"},
    {"density", "CPMG with this many pulses per unit length"},
    {"alpha", "Spectral exponent of S(w) = A / |w|^alpha, in [0, 2]"},
    {"noise-amp", "Spectral amplitude A"},
    {"ir-cutoff", "Lower frequency cutoff"},
    {"uv-cutoff", "Upper frequency cutoff"},
    {"omega0", "Central photon frequency offset"},
    {"sigma", "Photon frequency width parameter"},
    {"length-max", "Largest fiber length of the sweep"},
    {"grid-points", "Number of lengths in the sweep"},
    {"state", "Initial state: reference | bell | werner:p | file:PATH"},
    {"trials", "Monte Carlo trials"},
    {"seed", "Monte Carlo seed"},
    {"resolution", "Monte Carlo trajectory points per unit length"},
    {"modes", "Monte Carlo spectral synthesis modes"},
    {"mc-length", "Fiber length used by mc-check"},
    {"max-pulses", "Largest pulse count of the fig3 scan"},
    {"out", "Output file (simulate) or directory (figure)"},
};

SimulationConfig build_config(const std::optional<std::string>& config_path,
                              const std::map<std::string, std::optional<std::string>>& flags) {
    SimulationConfig cfg;
    if (config_path) fiberdd::apply_config_file(cfg, *config_path);
    for (const auto& [key, value] : flags)
        if (value) fiberdd::apply_setting(cfg, key, *value);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement of fiber-distributed photon pairs under dynamical decoupling"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_path;
    app.add_option("--config", config_path, "Configuration file of 'key = value' lines");
    std::map<std::string, std::optional<std::string>> flags;
    for (const auto& f : kSettingFlags) {
        flags[f.name];
        app.add_option(std::string("--") + f.name, flags[f.name], f.help);
    }

    auto* simulate = app.add_subcommand("simulate", "Sweep the fiber length and write L,f_L,gamma,concurrence");
    auto* figure = app.add_subcommand("figure", "Write a figure preset CSV (fig2a, fig2b, fig3, fig4)");
    std::string preset;
    figure->add_option("preset", preset, "fig2a | fig2b | fig3 | fig4")->required();
    auto* mc_check = app.add_subcommand("mc-check", "Compare the analytic coherence factor with Monte Carlo");
    auto* validate = app.add_subcommand("validate-config", "Validate the configuration and print it resolved");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fiberdd::exit_code::usage;
    }

    try {
        const SimulationConfig cfg = build_config(config_path, flags);
        fiberdd::print_resolved(cfg, std::cout);

        if (*validate) {
            const auto report = cfg.validation_report();
            if (report.empty()) {
                std::cout << "configuration ok\n";
                return fiberdd::exit_code::success;
            }
            for (const auto& line : report) std::cerr << "error: " << line << '\n';
            return fiberdd::exit_code::usage;
        }
        if (*simulate) {
            const auto outcome = fiberdd::run_simulate(cfg);
            std::cout << "wrote " << (cfg.out.empty() ? "curve.csv" : cfg.out) << '\n' << outcome.summary << '\n';
            return outcome.curve.count(fiberdd::PointStatus::failed) > 0 ? fiberdd::exit_code::nonconvergence
                                                                          : fiberdd::exit_code::success;
        }
        if (*figure) {
            const auto which = fiberdd::parse_figure(preset);
            const auto path = fiberdd::run_figure(which, cfg, cfg.out.empty() ? "figures" : cfg.out);
            std::cout << "wrote " << path.string() << '\n';
            return fiberdd::exit_code::success;
        }
        if (*mc_check) {
            const auto report = fiberdd::run_mc_check(cfg);
            std::cout << report.text;
            return report.passed ? fiberdd::exit_code::success : fiberdd::exit_code::mc_failure;
        }
    } catch (const fiberdd::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return fiberdd::exit_code::usage;
    } catch (const fiberdd::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return fiberdd::exit_code::io;
    } catch (const fiberdd::QuadratureError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return fiberdd::exit_code::nonconvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return fiberdd::exit_code::usage;
}
