#include "fiberdd/entanglement.hpp"

#include <stdexcept>

namespace fiberdd {

namespace {

double strict_concurrence(const PulseSequence& seq, const NoiseSpectrum& spec,
                          const SpectralProfile& profile, const TwoQubitXState& initial,
                          double length, const SweepOptions& opts) {
    const auto p = evaluate_point(seq, spec, profile, length, initial, opts);
    if (p.status == PointStatus::failed) {
        QuadratureResult best;
        best.value = p.f_length;
        best.abs_error = p.quadrature_error;
        best.converged = false;
        throw QuadratureError(best);
    }
    return p.concurrence;
}

}  // namespace

std::optional<double> esd_length(const PulseSequence& seq, const NoiseSpectrum& spec,
                                 const SpectralProfile& profile, const TwoQubitXState& initial,
                                 double max_length, const EsdOptions& opts) {
    if (!(max_length > 0.0)) throw std::invalid_argument("esd_length: max_length must be > 0");
    if (opts.scan_points < 200) throw std::invalid_argument("esd_length: scan needs >= 200 points");

    const auto grid = uniform_grid(max_length, opts.scan_points);
    const auto coarse = decoherence_curve(seq, spec, profile, grid, initial, opts.sweep);
    for (const auto& p : coarse.points)
        if (p.status == PointStatus::failed)
            throw QuadratureError({p.f_length, p.quadrature_error, 0, false});

    std::size_t hit = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (coarse.points[i].concurrence <= 0.0) {
            hit = i;
            break;
        }
    }
    if (hit == grid.size()) return std::nullopt;

    double lo = hit == 0 ? 0.0 : grid[hit - 1];
    double hi = grid[hit];
    const double width = opts.relative_tolerance * max_length;
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (strict_concurrence(seq, spec, profile, initial, mid, opts.sweep) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

PulseSequence sequence_for_count(int pulses) {
    if (pulses < 0) throw std::invalid_argument("pulse count must be >= 0");
    return pulses == 0 ? PulseSequence::free() : PulseSequence::cpmg(pulses);
}

PulseBudget min_pulses_for_target(double total_length, double target, const NoiseSpectrum& spec,
                                  const SpectralProfile& profile, const TwoQubitXState& initial,
                                  int max_pulses, const SweepOptions& opts) {
    if (!(total_length > 0.0)) throw std::invalid_argument("min_pulses_for_target: length must be > 0");
    if (max_pulses < 0) throw std::invalid_argument("min_pulses_for_target: max_pulses must be >= 0");
    PulseBudget out;
    if (target <= 0.0) {
        out.minimum = 0;
        return out;
    }
    for (int n = 0; n <= max_pulses; ++n) {
        const double c = strict_concurrence(sequence_for_count(n), spec, profile, initial,
                                            total_length, opts);
        out.concurrence_by_pulses.push_back(c);
        if (c >= target) {
            out.minimum = n;
            break;
        }
    }
    return out;
}

}  // namespace fiberdd
