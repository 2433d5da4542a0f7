#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "fiberdd/xstate.hpp"

namespace fiberdd::test {

inline std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
    return out;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Diagonal uniform on the simplex, coherences uniform inside their positivity disks.
inline TwoQubitXState random_xstate(std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TwoQubitXState s;
    double total = 0.0;
    for (auto& d : s.diag) total += (d = expo(rng));
    for (auto& d : s.diag) d /= total;
    auto disk = [&](double bound) {
        const double r = bound * std::sqrt(unit(rng));
        return std::polar(r, 2.0 * M_PI * unit(rng));
    };
    s.outer = disk(std::sqrt(s.diag[0] * s.diag[3]));
    s.inner = disk(std::sqrt(s.diag[1] * s.diag[2]));
    return s;
}

}  // namespace fiberdd::test
