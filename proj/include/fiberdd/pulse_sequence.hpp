#pragma once

#include <string>
#include <variant>
#include <vector>

namespace fiberdd {

/// Pulse-placement policies along the fiber.  Pulses are ideal zero-width
/// pi rotations (half-wave plates).
struct Free {};
struct SpinEcho {};
struct CpmgCount {
    int pulses = 1;
};
struct CpmgDensity {
    double per_length = 1.0;
};

class PulseSequence {
public:
    using Kind = std::variant<Free, SpinEcho, CpmgCount, CpmgDensity>;

    PulseSequence() = default;
    PulseSequence(Kind kind);  // NOLINT(google-explicit-constructor)

    static PulseSequence free() { return {Free{}}; }
    static PulseSequence spin_echo() { return {SpinEcho{}}; }
    static PulseSequence cpmg(int pulses) { return {CpmgCount{pulses}}; }
    static PulseSequence cpmg_density(double per_length) { return {CpmgDensity{per_length}}; }

    const Kind& kind() const { return kind_; }
    bool is_fixed_density() const { return std::holds_alternative<CpmgDensity>(kind_); }

    /// Number of pulses placed on a fiber of length L (no validation of the
    /// degenerate fixed-density case).
    int pulse_count(double length) const;

    /// Human-readable label, e.g. "free", "se", "cpmg:N=4", "cpmg:n=2".
    std::string label() const;

private:
    Kind kind_ = Free{};
};

/// Pulse locations for a fiber of length L; strictly increasing, inside (0, L).
/// Free -> {}, SpinEcho -> {L/2}, CPMG with N pulses -> L (k - 1/2) / N.
/// A fixed density uses N = round(n L) and throws std::domain_error if that is 0.
std::vector<double> pulse_positions(const PulseSequence& seq, double length);

/// As pulse_positions(), but a fixed-density sequence with round(n L) = 0 yields
/// no pulses (no waveplate lies inside a fiber that short).  Used by sweeps.
std::vector<double> pulse_positions_or_free(const PulseSequence& seq, double length);

/// (-1)^(number of pulses strictly before l); +1 at l = 0.
int toggling_sign(const PulseSequence& seq, double l, double length);

/// Same, for precomputed positions.
int toggling_sign(const std::vector<double>& positions, double l);

}  // namespace fiberdd
