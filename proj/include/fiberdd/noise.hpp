#pragma once

#include "fiberdd/quadrature.hpp"

namespace fiberdd {

/// Power-law spectral density S(w) = amplitude / |w|^exponent, supported on
/// ir_cutoff <= |w| <= uv_cutoff.  The noise is zero-mean stationary Gaussian
/// and fully specified by this spectrum.
struct NoiseSpectrum {
    double amplitude = 0.01;
    double exponent = 1.0;
    double ir_cutoff = 1e-3;
    double uv_cutoff = 1e3;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    /// Same spectrum with the amplitude multiplied by `factor`.
    NoiseSpectrum scaled(double factor) const;
};

/// A / |w|^alpha.  Throws std::domain_error outside the cutoff band; that
/// indicates a quadrature bound bug rather than a physical condition.
double spectrum_eval(const NoiseSpectrum& spec, double omega);

/// Two-point function (1/2pi) * integral of S(w) e^{-i w dL} over the
/// symmetric band.  Real and even in dL.  Throws QuadratureError when the
/// adaptive rule does not reach `opts`.
QuadratureResult correlation(const NoiseSpectrum& spec, double delta_length,
                             const QuadratureOptions& opts = {});

}  // namespace fiberdd
