#pragma once

// Stochastic check of the analytic coherence factor.  Noise trajectories are
// synthesized from random cosine/sine modes weighted by the spectrum, the
// toggling-frame phase is integrated on a uniform grid, and the coherence is
// the ensemble mean of cos(phase).  No filter function is involved.

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "fiberdd/dephasing.hpp"

namespace fiberdd {

struct McConfig {
    int trials = 10000;
    /// Trajectory grid points per unit length.
    int resolution = 4000;
    std::uint64_t seed = 20111;
    int frequency_modes = 1024;
    /// Worker threads; 0 picks the hardware concurrency.  Results do not depend on it.
    unsigned workers = 0;
    /// Upper bound on trajectory grid points.
    long long max_grid_points = 10'000'000;
};

class McConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Synthesis modes: log-uniformly spaced frequencies across the cutoff band with
/// amplitudes sqrt(S(w_j) dw_j / pi), so the sum of squared amplitudes
/// approximates the variance (1/pi) * integral of S.
struct NoiseModes {
    Eigen::VectorXd frequency;
    Eigen::VectorXd amplitude;
};

NoiseModes make_noise_modes(const NoiseSpectrum& spec, int count);

/// Uniform trajectory grid on [0, L]: segments = ceil(resolution * L).
struct TrajectoryGrid {
    double length = 0.0;
    long long segments = 0;
    double step() const { return length / static_cast<double>(segments); }
    Eigen::VectorXd nodes() const;
};

TrajectoryGrid make_grid(double length, int resolution);

/// beta(l_i) = sum_j c_j (a_j cos w_j l_i + b_j sin w_j l_i), a_j and b_j standard
/// normal draws from `rng` (a_j then b_j, mode by mode).
Eigen::VectorXd sample_noise_trajectory(const NoiseSpectrum& spec, double length, int resolution,
                                        std::mt19937_64& rng, int frequency_modes = 1024);

/// Trapezoid weights for integral of y(l) beta(l) dl on the grid, with the toggling
/// sign taken at segment midpoints.
Eigen::VectorXd phase_weights(const std::vector<double>& positions, const TrajectoryGrid& grid);

/// Throws McConfigError when the grid is too large or a pulse gap holds fewer
/// than 16 grid points.
void validate_mc(const McConfig& mc, const std::vector<double>& positions, double length);

struct McEstimate {
    double estimate = 1.0;   // mean of cos(phase)
    double std_error = 0.0;  // sample std of cos(phase) / sqrt(trials)
    double imag_mean = 0.0;  // mean of sin(phase); zero within noise
    double imag_std_error = 0.0;
    int trials = 0;
};

/// Per trial: draws a noise trajectory and a photon frequency from
/// N(omega0, sigma^2/2), integrates phase = w * integral y(l) beta(l) dl by the
/// trapezoid rule and records cos/sin of it.  Trial t draws from its own
/// generator seeded from (seed, t), so the result is bit-identical for any
/// worker count.
McEstimate mc_coherence(const PulseSequence& seq, const NoiseSpectrum& spec,
                        const SpectralProfile& profile, double length, const McConfig& mc);

/// Deterministic seed for trial `index` of a run seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// Reference for the per-trial reductions: serial mean and standard error.
struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
};
SampleStats sample_stats(const std::vector<double>& values);

}  // namespace fiberdd
