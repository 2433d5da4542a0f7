#include "fiberdd/filter.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fiberdd {

namespace {

// Recurrence steps between exact re-evaluations of the rotating phase.
constexpr int kResyncInterval = 64;
// Below this total phase the sum is evaluated in extended precision.
constexpr double kLowPhase = 1.0;

}  // namespace

FilterSpec::FilterSpec(std::vector<double> positions, double total_length)
    : positions_(std::move(positions)), total_length_(total_length) {
    if (!(total_length_ > 0.0) || !std::isfinite(total_length_))
        throw std::invalid_argument("FilterSpec: total length must be finite and > 0");
    double prev = 0.0;
    for (double p : positions_) {
        if (!(p > prev)) throw std::invalid_argument("FilterSpec: positions must increase inside (0, L)");
        prev = p;
    }
    if (!positions_.empty() && !(positions_.back() < total_length_))
        throw std::invalid_argument("FilterSpec: positions must lie inside (0, L)");

    if (positions_.size() >= 3) {
        const std::size_t n = positions_.size();
        spacing_ = (positions_.back() - positions_.front()) / static_cast<double>(n - 1);
        uniform_ = true;
        for (std::size_t k = 1; k < n && uniform_; ++k)
            uniform_ = std::abs(positions_[k] - positions_[k - 1] - spacing_) <= 1e-14 * total_length_;
    }
}

FilterSpec FilterSpec::from_sequence(const PulseSequence& seq, double total_length) {
    return {pulse_positions_or_free(seq, total_length), total_length};
}

double filter_generic(const FilterSpec& fs, double omega) {
    const auto& pos = fs.positions_;
    const double length = fs.total_length_;
    const std::size_t n = pos.size();
    // Phases are measured from the fiber centre; for symmetric sequences the
    // imaginary parts then cancel pairwise instead of against a large offset.
    const double centre = 0.5 * length;

    auto segment = [omega, centre](double a, double b) {
        return std::polar(std::sin(0.5 * omega * (b - a)), omega * (0.5 * (a + b) - centre));
    };

    if (n == 0) return 2.0 * std::norm(segment(0.0, length));
    const double last_sign = n % 2 == 0 ? 1.0 : -1.0;

    if (std::abs(omega * length) < kLowPhase) {
        // Extended precision: the segments cancel to many digits at low frequency.
        const long double w = omega, c = centre;
        auto term = [&](long double a, long double b) {
            return std::polar(std::sin(0.5L * w * (b - a)), w * (0.5L * (a + b) - c));
        };
        std::complex<long double> acc = term(0.0L, pos.front());
        for (std::size_t k = 1; k < n; ++k) {
            const auto t = term(pos[k - 1], pos[k]);
            acc += (k % 2 == 0) ? t : -t;
        }
        acc += static_cast<long double>(last_sign) * term(pos.back(), length);
        return static_cast<double>(2.0L * std::norm(acc));
    }

    std::complex<double> sum = segment(0.0, pos.front()) + last_sign * segment(pos.back(), length);
    if (fs.uniform_) {
        // Interior segments k = 1..n-1 share length d and have midpoints m_1 + (k-1) d.
        const double d = fs.spacing_;
        const double first_mid = 0.5 * (pos[0] + pos[1]) - centre;
        const std::complex<double> step = std::polar(1.0, omega * d);
        std::complex<double> phase;
        std::complex<double> interior;
        for (std::size_t k = 1; k < n; ++k) {
            if ((k - 1) % kResyncInterval == 0)
                phase = std::polar(1.0, omega * (first_mid + static_cast<double>(k - 1) * d));
            else
                phase *= step;
            interior += (k % 2 == 0) ? phase : -phase;
        }
        sum += std::sin(0.5 * omega * d) * interior;
    } else {
        for (std::size_t k = 1; k < n; ++k) {
            const auto t = segment(pos[k - 1], pos[k]);
            sum += (k % 2 == 0) ? t : -t;
        }
    }
    return 2.0 * std::norm(sum);
}

double filter_cpmg_closed(int pulses, double omega, double length) {
    if (pulses < 1) throw std::invalid_argument("filter_cpmg_closed: pulse count must be >= 1");
    if (!(length > 0.0)) throw std::invalid_argument("filter_cpmg_closed: length must be > 0");
    const double x = omega * length;
    const double n = static_cast<double>(pulses);
    const double c = std::cos(x / (2.0 * n));
    if (std::abs(c) < kClosedFormSingularityGuard)
        return filter_generic(FilterSpec::from_sequence(PulseSequence::cpmg(pulses), length), omega);
    const double s = std::sin(x / (4.0 * n));
    const double t = pulses % 2 == 0 ? std::sin(0.5 * x) : std::cos(0.5 * x);
    return 8.0 * (s * s) * (s * s) * (t * t) / (c * c);
}

FixedDensityFilter filter_fixed_density(double per_length, double omega, double length) {
    if (!(per_length > 0.0)) throw std::invalid_argument("filter_fixed_density: density must be > 0");
    if (!(length > 0.0)) throw std::invalid_argument("filter_fixed_density: length must be > 0");
    const double count = per_length * length;
    const double nearest = std::round(count);
    FixedDensityFilter out;
    out.continuum = !(std::abs(count - nearest) <= 1e-9 * std::max(1.0, count) &&
                      std::fmod(nearest, 2.0) == 0.0 && nearest > 0.0);

    const double c = std::cos(omega / (2.0 * per_length));
    if (std::abs(c) < kClosedFormSingularityGuard) {
        const auto seq = PulseSequence::cpmg_density(per_length);
        out.value = filter_generic(FilterSpec::from_sequence(seq, length), omega);
        return out;
    }
    const double s = std::sin(omega / (4.0 * per_length));
    const double t = std::sin(0.5 * omega * length);
    out.value = 8.0 * (s * s) * (s * s) * (t * t) / (c * c);
    return out;
}

}  // namespace fiberdd
