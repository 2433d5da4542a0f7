#pragma once

#include <optional>
#include <vector>

#include "fiberdd/dephasing.hpp"

namespace fiberdd {

struct EsdOptions {
    int scan_points = 200;
    /// Bisection stops once the bracket is narrower than this times max_length.
    double relative_tolerance = 1e-4;
    SweepOptions sweep{};
};

/// Smallest length in (0, max_length] at which the concurrence is exactly zero,
/// or nullopt when it stays positive on the whole scan grid.  A coarse uniform
/// scan finds the first separable point, then bisection narrows the bracket.
/// Throws QuadratureError if any evaluation fails.
std::optional<double> esd_length(const PulseSequence& seq, const NoiseSpectrum& spec,
                                 const SpectralProfile& profile, const TwoQubitXState& initial,
                                 double max_length, const EsdOptions& opts = {});

struct PulseBudget {
    /// Smallest CPMG pulse count reaching the target, nullopt if unreachable.
    std::optional<int> minimum;
    /// Concurrence at total_length for N = 0, 1, ... up to the answer (or N_max).
    std::vector<double> concurrence_by_pulses;
};

/// Linear scan over CPMG pulse counts N = 0..max_pulses (N = 0 is free
/// evolution) at a fixed total length.  No monotonicity in N is assumed; the
/// scan stops at the first N whose concurrence reaches target.
PulseBudget min_pulses_for_target(double total_length, double target, const NoiseSpectrum& spec,
                                  const SpectralProfile& profile, const TwoQubitXState& initial,
                                  int max_pulses = 512, const SweepOptions& opts = {});

/// Sequence used for a given count in pulse-budget scans: free for 0, CPMG otherwise.
PulseSequence sequence_for_count(int pulses);

}  // namespace fiberdd
