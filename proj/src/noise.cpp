#include "fiberdd/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fiberdd {

void NoiseSpectrum::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("noise: " + what); };
    if (!std::isfinite(amplitude) || amplitude < 0.0) fail("amplitude must be finite and >= 0");
    if (!std::isfinite(exponent) || exponent < 0.0 || exponent > 2.0)
        fail("exponent must lie in [0, 2]");
    if (!std::isfinite(ir_cutoff) || ir_cutoff <= 0.0) fail("ir_cutoff must be finite and > 0");
    if (!std::isfinite(uv_cutoff) || uv_cutoff <= ir_cutoff)
        fail("uv_cutoff must be finite and > ir_cutoff");
}

NoiseSpectrum NoiseSpectrum::scaled(double factor) const {
    NoiseSpectrum s = *this;
    s.amplitude *= factor;
    return s;
}

double spectrum_eval(const NoiseSpectrum& spec, double omega) {
    const double w = std::abs(omega);
    if (!(w >= spec.ir_cutoff && w <= spec.uv_cutoff))
        throw std::domain_error("spectrum_eval: |omega| = " + std::to_string(w) +
                                " outside the cutoff band");
    if (spec.exponent == 0.0) return spec.amplitude;
    return spec.amplitude * std::pow(w, -spec.exponent);
}

QuadratureResult correlation(const NoiseSpectrum& spec, double delta_length,
                             const QuadratureOptions& opts) {
    spec.validate();
    if (!std::isfinite(delta_length))
        throw std::invalid_argument("correlation: delta_length must be finite");
    const double d = std::abs(delta_length);
    const double width = d > 0.0 ? std::numbers::pi / d : spec.uv_cutoff;
    const auto edges = graded_edges(spec.ir_cutoff, spec.uv_cutoff, width);
    // Even integrand: twice the positive half-line, times 1/(2 pi).
    auto integrand = [&](double w) { return spectrum_eval(spec, w) * std::cos(w * d); };
    auto r = integrate(integrand, edges, opts);
    r.value /= std::numbers::pi;
    r.abs_error /= std::numbers::pi;
    return r;
}

}  // namespace fiberdd
