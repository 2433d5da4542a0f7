#include <doctest.h>

#include <cmath>

#include "fiberdd/monte_carlo.hpp"

using namespace fiberdd;

namespace {

McConfig quick(int trials = 4000) {
    McConfig mc;
    mc.trials = trials;
    mc.resolution = 2000;
    mc.frequency_modes = 512;
    return mc;
}

double analytic(const PulseSequence& seq, const NoiseSpectrum& spec, const SpectralProfile& p, double length) {
    return coherence_factor(overlap_integral(seq, spec, length).value, p);
}

}  // namespace

TEST_CASE("synthesized trajectories have zero mean and the spectral variance") {
    const NoiseSpectrum spec{};
    const int trials = 10000;
    std::mt19937_64 rng(42);
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        const auto beta = sample_noise_trajectory(spec, 1.0, 4, rng);
        const double v = beta(2);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / trials;
    const double var = sum_sq / trials - mean * mean;
    const double expected_var = correlation(spec, 0.0).value;
    CHECK(std::abs(mean) < 4.0 * std::sqrt(var / trials));
    CHECK(std::abs(var - expected_var) < 0.05 * expected_var);
}

TEST_CASE("mode variance converges to the spectral variance") {
    const NoiseSpectrum spec{};
    const auto modes = make_noise_modes(spec, 4096);
    const double total = modes.amplitude.squaredNorm();
    CHECK(total == doctest::Approx(correlation(spec, 0.0).value).epsilon(1e-5));
}

TEST_CASE("zero amplitude gives zero trajectories and perfect coherence") {
    const NoiseSpectrum quiet{0.0, 1.0, 1e-3, 1e3};
    std::mt19937_64 rng(1);
    CHECK(sample_noise_trajectory(quiet, 2.0, 10, rng).isZero(0.0));
    const auto est = mc_coherence(PulseSequence::free(), quiet, {}, 2.0, quick(100));
    CHECK(est.estimate == 1.0);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("Monte Carlo agrees with the analytic coherence factor") {
    const NoiseSpectrum spec{0.05, 1.0, 1e-3, 1e3};
    const SpectralProfile profile{};
    for (const auto& seq : {PulseSequence::free(), PulseSequence::spin_echo(), PulseSequence::cpmg(4)}) {
        const auto est = mc_coherence(seq, spec, profile, 2.0, quick(10000));
        const double want = analytic(seq, spec, profile, 2.0);
        CHECK(std::abs(est.estimate - want) < 4.0 * est.std_error);
        CHECK(std::abs(est.imag_mean) < 4.0 * est.imag_std_error);
    }
}

TEST_CASE("results are identical for any worker count") {
    const NoiseSpectrum spec{0.05, 1.0, 1e-3, 1e3};
    auto mc = quick(3000);
    mc.workers = 1;
    const auto a = mc_coherence(PulseSequence::cpmg(3), spec, {}, 1.5, mc);
    mc.workers = 3;
    const auto b = mc_coherence(PulseSequence::cpmg(3), spec, {}, 1.5, mc);
    mc.workers = 8;
    const auto c = mc_coherence(PulseSequence::cpmg(3), spec, {}, 1.5, mc);
    CHECK(a.estimate == b.estimate);
    CHECK(a.estimate == c.estimate);
    CHECK(a.std_error == c.std_error);
    CHECK(a.imag_mean == c.imag_mean);
}

TEST_CASE("different seeds give different estimates") {
    const NoiseSpectrum spec{0.05, 1.0, 1e-3, 1e3};
    auto mc = quick(500);
    const auto a = mc_coherence(PulseSequence::free(), spec, {}, 1.0, mc);
    mc.seed += 1;
    const auto b = mc_coherence(PulseSequence::free(), spec, {}, 1.0, mc);
    CHECK(a.estimate != b.estimate);
}

TEST_CASE("quadrupling trials halves the standard error") {
    const NoiseSpectrum spec{0.05, 1.0, 1e-3, 1e3};
    const auto a = mc_coherence(PulseSequence::free(), spec, {}, 2.0, quick(2500));
    const auto b = mc_coherence(PulseSequence::free(), spec, {}, 2.0, quick(10000));
    CHECK(b.std_error / a.std_error == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("CPMG estimate exceeds free evolution") {
    const NoiseSpectrum spec{0.05, 1.0, 1e-3, 1e3};
    const auto free = mc_coherence(PulseSequence::free(), spec, {}, 2.0, quick());
    const auto cpmg = mc_coherence(PulseSequence::cpmg(4), spec, {}, 2.0, quick());
    CHECK(cpmg.estimate > free.estimate);
}

TEST_CASE("serial reduction reference") {
    const auto s = sample_stats({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == 2.5);
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-15));
    CHECK(sample_stats({}).mean == 0.0);
}

TEST_CASE("per-trial estimates reduce to the reported mean") {
    // Rebuild the trial values serially from the published seeding scheme.
    const NoiseSpectrum spec{0.05, 1.0, 1e-3, 1e3};
    const SpectralProfile profile{};
    auto mc = quick(64);
    mc.workers = 4;
    const double length = 1.0;
    const auto est = mc_coherence(PulseSequence::spin_echo(), spec, profile, length, mc);

    const auto grid = make_grid(length, mc.resolution);
    const auto weights = phase_weights(pulse_positions(PulseSequence::spin_echo(), length), grid);
    const auto modes = make_noise_modes(spec, mc.frequency_modes);
    const Eigen::VectorXd l = grid.nodes();
    std::vector<double> re;
    for (int t = 0; t < mc.trials; ++t) {
        std::mt19937_64 rng(trial_seed(mc.seed, static_cast<std::uint64_t>(t)));
        std::normal_distribution<double> normal;
        const double omega = profile.omega0 + std::sqrt(profile.frequency_variance()) * normal(rng);
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(l.size());
        for (Eigen::Index j = 0; j < modes.frequency.size(); ++j) {
            const double a = normal(rng), b = normal(rng);
            const Eigen::ArrayXd arg = modes.frequency(j) * l.array();
            beta.array() += modes.amplitude(j) * (a * arg.cos() + b * arg.sin());
        }
        re.push_back(std::cos(omega * weights.dot(beta)));
    }
    const auto ref = sample_stats(re);
    CHECK(est.estimate == doctest::Approx(ref.mean).epsilon(1e-12));
    CHECK(est.std_error == doctest::Approx(ref.std_error).epsilon(1e-9));
}

TEST_CASE("phase weights integrate the toggling sign") {
    const auto grid = make_grid(4.0, 100);
    const auto w_free = phase_weights({}, grid);
    CHECK(w_free.sum() == doctest::Approx(4.0).epsilon(1e-13));
    const auto w_echo = phase_weights({2.0}, grid);
    CHECK(std::abs(w_echo.sum()) < 1e-13);
}

TEST_CASE("configuration errors are raised before sampling") {
    McConfig mc;
    mc.resolution = 10;
    CHECK_THROWS_AS(mc_coherence(PulseSequence::cpmg(8), {}, {}, 1.0, mc), McConfigError);
    mc = McConfig{};
    mc.max_grid_points = 1000;
    try {
        (void)mc_coherence(PulseSequence::free(), {}, {}, 1.0, mc);
        FAIL("expected a configuration error");
    } catch (const McConfigError& e) {
        CHECK(std::string(e.what()).find("reduce") != std::string::npos);
    }
    mc = McConfig{};
    mc.trials = 0;
    CHECK_THROWS_AS(mc_coherence(PulseSequence::free(), {}, {}, 1.0, mc), McConfigError);
    CHECK_THROWS_AS(make_grid(0.0, 10), McConfigError);
}
