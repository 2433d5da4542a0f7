#pragma once

// Configuration, sweeps and CSV output behind the command-line tool.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fiberdd/dephasing.hpp"
#include "fiberdd/entanglement.hpp"
#include "fiberdd/monte_carlo.hpp"

namespace fiberdd {

/// Invalid configuration or command line; exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written; exit code 4.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int usage = 2;
inline constexpr int nonconvergence = 3;
inline constexpr int io = 4;
inline constexpr int mc_failure = 5;
}  // namespace exit_code

enum class SequenceKind { free, spin_echo, cpmg };

struct SimulationConfig {
    SequenceKind sequence = SequenceKind::free;
    std::optional<int> pulses;       // CPMG with a fixed count
    std::optional<double> density;   // CPMG with fixed spacing; default when neither is set
    NoiseSpectrum noise{};
    SpectralProfile profile{};
    std::string state = "reference";     // reference | bell | werner:p | file:PATH
    double length_max = 50.0;
    int grid_points = 200;
    int max_pulses = 64;             // fig3 scan bound
    double mc_length = 2.0;          // fiber length used by mc-check
    McConfig mc{};
    std::string out;                 // empty: subcommand default

    static constexpr double kDefaultDensity = 0.2;

    PulseSequence pulse_sequence() const;
    TwoQubitXState initial_state() const;

    /// Every problem found, one message per field; empty when valid.
    std::vector<std::string> validation_report() const;
    /// Throws UsageError carrying the whole report.
    void validate() const;

    /// "key = value" lines with all defaults expanded, in a fixed order.
    std::vector<std::pair<std::string, std::string>> resolved() const;
};

/// Applies one setting.  Keys match the long flag names; '-' and '_' are
/// interchangeable.  Throws UsageError for unknown keys or malformed values.
void apply_setting(SimulationConfig& cfg, const std::string& key, const std::string& value);

/// Reads "key = value" lines; '#' starts a comment.  Errors carry the line number.
void apply_config_stream(SimulationConfig& cfg, std::istream& in, const std::string& origin);
void apply_config_file(SimulationConfig& cfg, const std::filesystem::path& path);

/// Writes the resolved configuration as "# key = value" lines.
void print_resolved(const SimulationConfig& cfg, std::ostream& os);

/// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_number(double value);

/// Shortest decimal that reads back to the same double; locale independent.
std::string format_shortest(double value);

void write_curve_csv(std::ostream& os, const DecoherenceCurve& curve);

struct SimulateOutcome {
    DecoherenceCurve curve;
    std::optional<double> esd;
    std::string summary;
};

/// Sweeps the configured sequence, writes the CSV to cfg.out (default
/// "curve.csv") and returns the summary line.
SimulateOutcome run_simulate(const SimulationConfig& cfg);

enum class FigurePreset { fig2a, fig2b, fig3, fig4 };
FigurePreset parse_figure(const std::string& name);
std::string to_string(FigurePreset preset);

/// One named curve of a figure; fig3 rows additionally carry a pulse count.
struct FigureSeries {
    std::string name;
    DecoherenceCurve curve;
};

struct FigureData {
    FigurePreset preset;
    std::vector<std::string> header_notes;
    std::vector<FigureSeries> series;
};

inline constexpr double kFig2aDensities[] = {0.1, 0.2, 0.4};
inline constexpr double kFig4Exponents[] = {0.5, 0.75, 1.0, 1.25, 1.5};
inline constexpr double kFig3Length = 50.0;

FigureData compute_figure(FigurePreset preset, const SimulationConfig& cfg);
void write_figure_csv(std::ostream& os, const FigureData& fig);

/// Computes the preset and writes <out_dir>/<preset>.csv; returns the path.
std::filesystem::path run_figure(FigurePreset preset, const SimulationConfig& cfg,
                                 const std::filesystem::path& out_dir);

struct McCheckReport {
    double length = 0.0;
    double analytic_gamma = 1.0;
    McEstimate mc{};
    double z_score = 0.0;
    bool passed = true;
    std::string text;
};

/// Compares the analytic coherence factor against the Monte Carlo estimate at
/// cfg.mc_length.  passed is false when |z| > 4.
McCheckReport run_mc_check(const SimulationConfig& cfg);

}  // namespace fiberdd
