#include "fiberdd/dephasing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace fiberdd {

void SpectralProfile::validate() const {
    if (!std::isfinite(omega0)) throw std::invalid_argument("profile: omega0 must be finite");
    if (!std::isfinite(sigma) || sigma < 0.0)
        throw std::invalid_argument("profile: sigma must be finite and >= 0");
}

QuadratureResult overlap_integral(const FilterSpec& fs, const NoiseSpectrum& spec,
                                  const QuadratureOptions& opts) {
    spec.validate();
    if (spec.amplitude == 0.0) return {};
    const double length = fs.total_length();
    const auto edges = graded_edges(spec.ir_cutoff, spec.uv_cutoff, std::numbers::pi / length);
    auto integrand = [&](double w) {
        return spectrum_eval(spec, w) * filter_generic(fs, w) / (w * w);
    };
    // Even integrand: (1/2pi) * 2 * positive half-band.
    auto r = integrate_panels(integrand, edges, opts);
    r.value /= std::numbers::pi;
    r.abs_error /= std::numbers::pi;
    if (!r.converged) throw QuadratureError(r);
    return r;
}

QuadratureResult overlap_integral(const PulseSequence& seq, const NoiseSpectrum& spec,
                                  double length, const QuadratureOptions& opts) {
    return overlap_integral(FilterSpec(pulse_positions(seq, length), length), spec, opts);
}

double coherence_factor(double f_length, const SpectralProfile& profile) {
    if (!(f_length >= 0.0)) throw std::domain_error("coherence_factor: f(L) must be >= 0");
    const double s2f = profile.sigma * profile.sigma * f_length;
    return std::exp(-profile.omega0 * profile.omega0 * f_length / (1.0 + s2f)) / std::sqrt(1.0 + s2f);
}

std::string to_string(PointStatus status) {
    switch (status) {
        case PointStatus::ok: return "ok";
        case PointStatus::flagged: return "flagged";
        case PointStatus::failed: return "failed";
    }
    return "unknown";
}

std::size_t DecoherenceCurve::count(PointStatus status) const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(),
                                                  [&](const CurvePoint& p) { return p.status == status; }));
}

CurvePoint evaluate_point(const PulseSequence& seq, const NoiseSpectrum& spec,
                          const SpectralProfile& profile, double length,
                          const TwoQubitXState& state, const SweepOptions& opts) {
    CurvePoint p;
    p.length = length;
    const FilterSpec fs(pulse_positions_or_free(seq, length), length);
    p.pulses = fs.pulse_count();
    QuadratureResult q;
    try {
        q = overlap_integral(fs, spec, opts.quadrature);
    } catch (const QuadratureError& e) {
        q = e.best();
        const double loose = std::max(opts.loose_tolerance, opts.loose_tolerance * std::abs(q.value));
        p.status = q.abs_error <= loose ? PointStatus::flagged : PointStatus::failed;
    }
    p.f_length = std::max(0.0, q.value);
    p.quadrature_error = q.abs_error;
    p.gamma = coherence_factor(p.f_length, profile);
    // An underflowed factor still leaves the state fully dephased.
    const double applied = std::max(p.gamma, std::numeric_limits<double>::min());
    p.concurrence = concurrence(apply_dephasing(state, applied));
    return p;
}

DecoherenceCurve decoherence_curve(const PulseSequence& seq, const NoiseSpectrum& spec,
                                   const SpectralProfile& profile,
                                   const std::vector<double>& lengths,
                                   const TwoQubitXState& state, const SweepOptions& opts) {
    spec.validate();
    profile.validate();
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
            throw std::invalid_argument("decoherence_curve: lengths must be finite and > 0");
        if (i > 0 && !(lengths[i] > lengths[i - 1]))
            throw std::invalid_argument("decoherence_curve: lengths must be strictly increasing");
    }

    DecoherenceCurve curve;
    curve.points.resize(lengths.size());
    unsigned workers = opts.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.workers;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, lengths.size())));

    // Longest lengths are the most expensive; hand them out first.
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < lengths.size(); k = next++) {
            const std::size_t i = lengths.size() - 1 - k;
            curve.points[i] = evaluate_point(seq, spec, profile, lengths[i], state, opts);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    return curve;
}

std::vector<double> uniform_grid(double max_length, int points) {
    if (!(max_length > 0.0) || points < 1)
        throw std::invalid_argument("uniform_grid: need max_length > 0 and points >= 1");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int k = 1; k <= points; ++k) grid[static_cast<std::size_t>(k - 1)] = max_length * k / points;
    return grid;
}

}  // namespace fiberdd
