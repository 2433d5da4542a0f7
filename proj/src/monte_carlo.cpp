#include "fiberdd/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <thread>

namespace fiberdd {

namespace {

constexpr long long kResyncInterval = 256;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Projections I_j = sum_i w_i cos(w_j l_i) and J_j = sum_i w_i sin(w_j l_i).
// Since the phase integral is linear in beta, sum_i w_i beta_i equals
// sum_j c_j (a_j I_j + b_j J_j) exactly; trials then cost O(modes).
void project_modes(const NoiseModes& modes, const Eigen::VectorXd& weights, double step,
                   Eigen::VectorXd& cos_part, Eigen::VectorXd& sin_part) {
    const Eigen::Index m = modes.frequency.size();
    const Eigen::Index g = weights.size();
    cos_part.resize(m);
    sin_part.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double w = modes.frequency(j);
        const std::complex<double> rot = std::polar(1.0, w * step);
        std::complex<double> phase;
        std::complex<double> acc;
        for (Eigen::Index i = 0; i < g; ++i) {
            if (i % kResyncInterval == 0)
                phase = std::polar(1.0, w * step * static_cast<double>(i));
            else
                phase *= rot;
            acc += weights(i) * phase;
        }
        cos_part(j) = acc.real();
        sin_part(j) = acc.imag();
    }
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

NoiseModes make_noise_modes(const NoiseSpectrum& spec, int count) {
    spec.validate();
    if (count < 1) throw McConfigError("frequency_modes must be >= 1");
    NoiseModes modes;
    modes.frequency.resize(count);
    modes.amplitude.resize(count);
    const double u0 = std::log(spec.ir_cutoff);
    const double du = (std::log(spec.uv_cutoff) - u0) / count;
    for (int j = 0; j < count; ++j) {
        const double w = std::min(spec.uv_cutoff, std::max(spec.ir_cutoff, std::exp(u0 + (j + 0.5) * du)));
        modes.frequency(j) = w;
        modes.amplitude(j) = std::sqrt(spectrum_eval(spec, w) * w * du / std::numbers::pi);
    }
    return modes;
}

Eigen::VectorXd TrajectoryGrid::nodes() const {
    return Eigen::VectorXd::LinSpaced(segments + 1, 0.0, length);
}

TrajectoryGrid make_grid(double length, int resolution) {
    if (!(length > 0.0) || !std::isfinite(length)) throw McConfigError("length must be finite and > 0");
    if (resolution < 1) throw McConfigError("resolution must be >= 1");
    TrajectoryGrid g;
    g.length = length;
    g.segments = std::max(1LL, static_cast<long long>(std::ceil(resolution * length)));
    return g;
}

Eigen::VectorXd sample_noise_trajectory(const NoiseSpectrum& spec, double length, int resolution,
                                        std::mt19937_64& rng, int frequency_modes) {
    const auto modes = make_noise_modes(spec, frequency_modes);
    const auto grid = make_grid(length, resolution);
    const Eigen::VectorXd l = grid.nodes();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(l.size());
    std::normal_distribution<double> normal;
    for (Eigen::Index j = 0; j < modes.frequency.size(); ++j) {
        const double a = normal(rng);
        const double b = normal(rng);
        const double c = modes.amplitude(j);
        if (c == 0.0) continue;
        const Eigen::ArrayXd arg = modes.frequency(j) * l.array();
        beta.array() += c * (a * arg.cos() + b * arg.sin());
    }
    return beta;
}

Eigen::VectorXd phase_weights(const std::vector<double>& positions, const TrajectoryGrid& grid) {
    const double h = grid.step();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(grid.segments + 1);
    for (long long i = 0; i < grid.segments; ++i) {
        const double mid = (static_cast<double>(i) + 0.5) * h;
        const double half = 0.5 * h * toggling_sign(positions, mid);
        w(i) += half;
        w(i + 1) += half;
    }
    return w;
}

void validate_mc(const McConfig& mc, const std::vector<double>& positions, double length) {
    if (mc.trials < 1) throw McConfigError("trials must be >= 1");
    if (mc.frequency_modes < 1) throw McConfigError("frequency_modes must be >= 1");
    const auto grid = make_grid(length, mc.resolution);
    if (grid.segments + 1 > mc.max_grid_points) {
        std::ostringstream os;
        os << "trajectory grid of " << grid.segments + 1 << " points exceeds the limit of "
           << mc.max_grid_points << "; reduce the length or the resolution (at most "
           << static_cast<long long>(mc.max_grid_points / length) << " points per unit length at L = "
           << length << ")";
        throw McConfigError(os.str());
    }
    double shortest = length;
    double prev = 0.0;
    for (double p : positions) {
        shortest = std::min(shortest, p - prev);
        prev = p;
    }
    shortest = std::min(shortest, length - prev);
    const double per_gap = shortest / grid.step();
    if (per_gap < 16.0) {
        std::ostringstream os;
        os << "resolution " << mc.resolution << " leaves only " << per_gap
           << " grid points in the shortest pulse gap (" << shortest << "); need >= 16, i.e. resolution >= "
           << static_cast<long long>(std::ceil(16.0 / shortest));
        throw McConfigError(os.str());
    }
}

SampleStats sample_stats(const std::vector<double>& values) {
    SampleStats s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return s;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double n = static_cast<double>(values.size());
    s.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return s;
}

McEstimate mc_coherence(const PulseSequence& seq, const NoiseSpectrum& spec,
                        const SpectralProfile& profile, double length, const McConfig& mc) {
    spec.validate();
    profile.validate();
    const auto positions = pulse_positions(seq, length);
    validate_mc(mc, positions, length);

    const auto grid = make_grid(length, mc.resolution);
    const auto modes = make_noise_modes(spec, mc.frequency_modes);
    Eigen::VectorXd proj_cos, proj_sin;
    project_modes(modes, phase_weights(positions, grid), grid.step(), proj_cos, proj_sin);
    const Eigen::VectorXd cos_coef = modes.amplitude.cwiseProduct(proj_cos);
    const Eigen::VectorXd sin_coef = modes.amplitude.cwiseProduct(proj_sin);

    const auto trials = static_cast<std::size_t>(mc.trials);
    std::vector<double> re(trials), im(trials);
    const double freq_sd = std::sqrt(profile.frequency_variance());

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t t = next++; t < trials; t = next++) {
            std::mt19937_64 rng(trial_seed(mc.seed, t));
            std::normal_distribution<double> normal;
            const double omega = profile.omega0 + freq_sd * normal(rng);
            double integral = 0.0;
            for (Eigen::Index j = 0; j < cos_coef.size(); ++j) {
                const double a = normal(rng);
                const double b = normal(rng);
                integral += a * cos_coef(j) + b * sin_coef(j);
            }
            const double phase = omega * integral;
            re[t] = std::cos(phase);
            im[t] = std::sin(phase);
        }
    };
    unsigned workers = mc.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : mc.workers;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(trials));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    const auto r = sample_stats(re);
    const auto i = sample_stats(im);
    return {r.mean, r.std_error, i.mean, i.std_error, mc.trials};
}

}  // namespace fiberdd
