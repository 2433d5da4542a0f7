#pragma once

#include <vector>

#include "fiberdd/pulse_sequence.hpp"

namespace fiberdd {

/// Pulse locations on a fiber of given total length.  Positions must be
/// strictly increasing and lie in the open interval (0, total_length).
class FilterSpec {
public:
    FilterSpec(std::vector<double> positions, double total_length);

    static FilterSpec from_sequence(const PulseSequence& seq, double total_length);

    const std::vector<double>& positions() const { return positions_; }
    double total_length() const { return total_length_; }
    int pulse_count() const { return static_cast<int>(positions_.size()); }

    /// True when all inter-pulse gaps are equal; the phase sum then runs on a
    /// rotation recurrence instead of one sincos per segment.
    bool uniform_spacing() const { return uniform_; }

private:
    std::vector<double> positions_;
    double total_length_;
    bool uniform_ = false;
    double spacing_ = 0.0;

    friend double filter_generic(const FilterSpec&, double);
};

/// F = (1/2) |sum_{k=0}^{N} (-1)^k (e^{i w l_{k+1}} - e^{i w l_k})|^2 with
/// l_0 = 0 and l_{N+1} = L.  Free evolution gives 2 sin^2(wL/2).  Each segment
/// term is evaluated as 2i sin(w d/2) e^{i w m} (d its length, m its midpoint),
/// so the low-frequency limit keeps full relative precision.
double filter_generic(const FilterSpec& fs, double omega);

/// Closed CPMG form with x = wL:
///   even N: 8 sin^4(x/4N) sin^2(x/2) / cos^2(x/2N)
///   odd  N: 8 sin^4(x/4N) cos^2(x/2) / cos^2(x/2N)
/// Near the removable zeros of cos(x/2N) this evaluates the generic sum.
double filter_cpmg_closed(int pulses, double omega, double length);

struct FixedDensityFilter {
    double value = 0.0;
    /// True unless n L is an even integer, i.e. the value is the continuum
    /// idealization rather than the filter of the quantized sequence.
    bool continuum = true;
};

/// Fixed pulse-interval form 8 sin^4(w/4n) sin^2(wL/2) / cos^2(w/2n).  Near the
/// zeros of cos(w/2n) this evaluates the generic sum for N = round(n L).
FixedDensityFilter filter_fixed_density(double per_length, double omega, double length);

/// |cos| below this hands the closed forms over to the generic sum.
inline constexpr double kClosedFormSingularityGuard = 1e-4;

}  // namespace fiberdd
