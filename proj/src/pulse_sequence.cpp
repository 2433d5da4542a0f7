#include "fiberdd/pulse_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fiberdd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> cpmg_positions(int pulses, double length) {
    std::vector<double> out(static_cast<std::size_t>(pulses));
    for (int k = 1; k <= pulses; ++k)
        out[static_cast<std::size_t>(k - 1)] = length * (k - 0.5) / pulses;
    return out;
}

void check_length(double length) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("pulse sequence: length must be finite and > 0");
}

}  // namespace

PulseSequence::PulseSequence(Kind kind) : kind_(kind) {
    std::visit(overloaded{
                   [](const CpmgCount& c) {
                       if (c.pulses < 1)
                           throw std::invalid_argument("cpmg: pulse count must be >= 1");
                   },
                   [](const CpmgDensity& d) {
                       if (!(d.per_length > 0.0) || !std::isfinite(d.per_length))
                           throw std::invalid_argument("cpmg: pulse density must be > 0");
                   },
                   [](const auto&) {},
               },
               kind_);
}

int PulseSequence::pulse_count(double length) const {
    return std::visit(overloaded{
                          [](const Free&) { return 0; },
                          [](const SpinEcho&) { return 1; },
                          [](const CpmgCount& c) { return c.pulses; },
                          [length](const CpmgDensity& d) {
                              return static_cast<int>(std::lround(d.per_length * length));
                          },
                      },
                      kind_);
}

std::string PulseSequence::label() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const Free&) { os << "free"; },
                   [&](const SpinEcho&) { os << "se"; },
                   [&](const CpmgCount& c) { os << "cpmg:N=" << c.pulses; },
                   [&](const CpmgDensity& d) { os << "cpmg:n=" << d.per_length; },
               },
               kind_);
    return os.str();
}

std::vector<double> pulse_positions(const PulseSequence& seq, double length) {
    check_length(length);
    if (seq.is_fixed_density() && seq.pulse_count(length) == 0)
        throw std::domain_error("sequence degenerates to free evolution; use Free explicitly");
    return pulse_positions_or_free(seq, length);
}

std::vector<double> pulse_positions_or_free(const PulseSequence& seq, double length) {
    check_length(length);
    return std::visit(overloaded{
                          [](const Free&) { return std::vector<double>{}; },
                          [length](const SpinEcho&) { return std::vector<double>{length / 2}; },
                          [length](const CpmgCount& c) { return cpmg_positions(c.pulses, length); },
                          [&](const CpmgDensity&) {
                              return cpmg_positions(seq.pulse_count(length), length);
                          },
                      },
                      seq.kind());
}

int toggling_sign(const std::vector<double>& positions, double l) {
    const auto crossed = std::lower_bound(positions.begin(), positions.end(), l) - positions.begin();
    return crossed % 2 == 0 ? 1 : -1;
}

int toggling_sign(const PulseSequence& seq, double l, double length) {
    check_length(length);
    if (!(l >= 0.0 && l <= length))
        throw std::domain_error("toggling_sign: l outside [0, L]");
    return toggling_sign(pulse_positions_or_free(seq, length), l);
}

}  // namespace fiberdd
