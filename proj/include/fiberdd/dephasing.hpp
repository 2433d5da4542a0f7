#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fiberdd/filter.hpp"
#include "fiberdd/noise.hpp"
#include "fiberdd/pulse_sequence.hpp"
#include "fiberdd/quadrature.hpp"
#include "fiberdd/xstate.hpp"

namespace fiberdd {

/// Photon frequency-offset distribution.  The intensity is Gaussian with mean
/// omega0 and variance sigma^2 / 2; that variance is what makes the frequency
/// average of exp(-w^2 f) come out as coherence_factor().
struct SpectralProfile {
    double omega0 = 1.0;
    double sigma = 0.1;

    void validate() const;
    double frequency_variance() const { return 0.5 * sigma * sigma; }
};

/// f(L) = (1/2pi) * integral over the symmetric band of S(w) F(wL) / w^2,
/// using the generic filter of the actual pulse positions.  The initial
/// panels are at most pi/L wide (half the fastest oscillation period of the
/// filter) and are refined adaptively.  Throws QuadratureError on failure.
QuadratureResult overlap_integral(const FilterSpec& fs, const NoiseSpectrum& spec,
                                  const QuadratureOptions& opts = {});

/// Convenience overload; a fixed-density sequence with round(nL) = 0 throws.
QuadratureResult overlap_integral(const PulseSequence& seq, const NoiseSpectrum& spec,
                                  double length, const QuadratureOptions& opts = {});

/// Gamma = exp(-w0^2 f / (1 + s^2 f)) / sqrt(1 + s^2 f).
double coherence_factor(double f_length, const SpectralProfile& profile);

enum class PointStatus {
    ok,       // quadrature met the strict tolerance
    flagged,  // only the loose tolerance was met
    failed,   // not even the loose tolerance; values are best estimates
};

std::string to_string(PointStatus status);

struct CurvePoint {
    double length = 0.0;
    double f_length = 0.0;
    double gamma = 1.0;
    double concurrence = 0.0;
    double quadrature_error = 0.0;
    int pulses = 0;
    PointStatus status = PointStatus::ok;
};

struct DecoherenceCurve {
    std::vector<CurvePoint> points;

    std::size_t count(PointStatus status) const;
    bool all_ok() const { return count(PointStatus::ok) == points.size(); }
};

struct SweepOptions {
    QuadratureOptions quadrature{};
    /// Error bound (absolute or relative) a point must meet to be flagged
    /// rather than failed.
    double loose_tolerance = 1e-5;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned workers = 0;
};

/// One coherence factor plus the dephased state's concurrence at a single length.
CurvePoint evaluate_point(const PulseSequence& seq, const NoiseSpectrum& spec,
                          const SpectralProfile& profile, double length,
                          const TwoQubitXState& state, const SweepOptions& opts = {});

/// Sweeps a strictly increasing grid of lengths.  Pulse positions are re-derived
/// per length, so a fixed density places round(nL) pulses at each point.  Failed
/// quadratures mark the point instead of aborting the sweep.  The result does
/// not depend on the worker count.
DecoherenceCurve decoherence_curve(const PulseSequence& seq, const NoiseSpectrum& spec,
                                   const SpectralProfile& profile,
                                   const std::vector<double>& lengths,
                                   const TwoQubitXState& state, const SweepOptions& opts = {});

/// points evenly spaced lengths max/points, 2 max/points, ..., max.
std::vector<double> uniform_grid(double max_length, int points);

}  // namespace fiberdd
