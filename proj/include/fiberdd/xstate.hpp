#pragma once

// Two-qubit X states in the polarization basis (HH, HV, VH, VV).  The first
// tensor factor is the photon travelling through the fiber; dephasing acts on
// it and attenuates the anti-diagonal coherences rho14 and rho23.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberdd {

template <typename Scalar>
struct XState {
    using Complex = std::complex<Scalar>;
    using Matrix4 = Eigen::Matrix<Complex, 4, 4>;

    std::array<Scalar, 4> diag{};  // rho11, rho22, rho33, rho44
    Complex inner{};               // rho23
    Complex outer{};               // rho14

    Scalar trace() const { return diag[0] + diag[1] + diag[2] + diag[3]; }

    Matrix4 matrix() const {
        Matrix4 m = Matrix4::Zero();
        for (int i = 0; i < 4; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
        m(0, 3) = outer;
        m(3, 0) = std::conj(outer);
        m(1, 2) = inner;
        m(2, 1) = std::conj(inner);
        return m;
    }

    bool operator==(const XState&) const = default;

    static XState bell_phi_plus() {
        XState s;
        s.diag = {Scalar(0.5), 0, 0, Scalar(0.5)};
        s.outer = Scalar(0.5);
        return s;
    }

    /// p |Phi+><Phi+| + (1 - p) I/4.
    static XState werner(Scalar p) {
        XState s;
        const Scalar q = (1 - p) / 4;
        s.diag = {p / 2 + q, q, q, p / 2 + q};
        s.outer = p / 2;
        return s;
    }

    static XState maximally_mixed() {
        XState s;
        s.diag = {Scalar(0.25), Scalar(0.25), Scalar(0.25), Scalar(0.25)};
        return s;
    }

    /// (1/3) [[1/2,0,0,0],[0,1,1,0],[0,1,1,0],[0,0,0,1/2]], concurrence 1/3.
    static XState reference_mixed() {
        XState s;
        s.diag = {Scalar(1) / 6, Scalar(1) / 3, Scalar(1) / 3, Scalar(1) / 6};
        s.inner = Scalar(1) / 3;
        return s;
    }
};

using TwoQubitXState = XState<double>;

struct StateViolation {
    std::string check;
    double margin;  // how far past the limit; positive means violated
};

/// Empty when the state satisfies unit trace (1e-12) and both positivity
/// inequalities |rho14|^2 <= rho11 rho44, |rho23|^2 <= rho22 rho33.
template <typename Scalar>
std::vector<StateViolation> validate_state(const XState<Scalar>& s, double trace_tol = 1e-12) {
    std::vector<StateViolation> out;
    const double tr_err = std::abs(static_cast<double>(s.trace()) - 1.0);
    if (!(tr_err <= trace_tol)) out.push_back({"trace", tr_err - trace_tol});
    for (std::size_t i = 0; i < 4; ++i)
        if (!(s.diag[i] >= 0)) out.push_back({"rho" + std::to_string(11 * (i + 1)) + " >= 0", -double(s.diag[i])});
    const double outer_gap = double(std::norm(s.outer)) - double(s.diag[0] * s.diag[3]);
    if (!(outer_gap <= 0.0)) out.push_back({"|rho14|^2 <= rho11*rho44", outer_gap});
    const double inner_gap = double(std::norm(s.inner)) - double(s.diag[1] * s.diag[2]);
    if (!(inner_gap <= 0.0)) out.push_back({"|rho23|^2 <= rho22*rho33", inner_gap});
    return out;
}

/// Dephasing of the first qubit: both anti-diagonal coherences scale by gamma,
/// populations are untouched.
template <typename Scalar>
XState<Scalar> apply_dephasing(const XState<Scalar>& s, Scalar gamma) {
    if (!(gamma > 0 && gamma <= 1))
        throw std::domain_error("apply_dephasing: gamma must lie in (0, 1]");
    XState<Scalar> out = s;
    out.outer *= gamma;
    out.inner *= gamma;
    return out;
}

/// Eigenvalues of rho * rho~ below this are treated as zero.
inline constexpr double kConcurrenceEigenFloor = 1e-12;

/// Wootters concurrence from the eigenvalues of rho (sy x sy) rho* (sy x sy).
template <typename Scalar>
Scalar concurrence(const XState<Scalar>& s) {
    using Matrix4 = typename XState<Scalar>::Matrix4;
    const Matrix4 rho = s.matrix();
    Matrix4 flip = Matrix4::Zero();
    // sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1).
    flip(0, 3) = Scalar(-1);
    flip(1, 2) = Scalar(1);
    flip(2, 1) = Scalar(1);
    flip(3, 0) = Scalar(-1);
    const Matrix4 r = rho * flip * rho.conjugate() * flip;

    Eigen::ComplexEigenSolver<Matrix4> solver(r, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("concurrence: eigenvalue solver failed");
    std::array<Scalar, 4> lambda{};
    for (int i = 0; i < 4; ++i) {
        const Scalar re = solver.eigenvalues()(i).real();
        lambda[static_cast<std::size_t>(i)] = re < Scalar(kConcurrenceEigenFloor) ? Scalar(0) : re;
    }
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    using std::sqrt;
    const Scalar c = sqrt(lambda[0]) - sqrt(lambda[1]) - sqrt(lambda[2]) - sqrt(lambda[3]);
    return std::max(Scalar(0), c);
}

/// X-state closed form 2 max(0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44)).
template <typename Scalar>
Scalar concurrence_xstate_closed(const XState<Scalar>& s) {
    using std::abs;
    using std::sqrt;
    const Scalar a = abs(s.outer) - sqrt(s.diag[1] * s.diag[2]);
    const Scalar b = abs(s.inner) - sqrt(s.diag[0] * s.diag[3]);
    return 2 * std::max({Scalar(0), a, b});
}

/// Coherence factor at or below which the dephased state is separable: the
/// zero of the piecewise-linear closed form in gamma.  0 when entanglement only
/// decays asymptotically, 1 when the state is already separable.
template <typename Scalar>
Scalar separability_threshold(const XState<Scalar>& s) {
    using std::abs;
    using std::sqrt;
    // Branch i of the closed form is positive iff gamma > floor_i / coherence_i.
    auto onset = [](Scalar coherence, Scalar floor) {
        return coherence > 0 ? floor / coherence : Scalar(1);
    };
    const Scalar a = onset(abs(s.outer), sqrt(s.diag[1] * s.diag[2]));
    const Scalar b = onset(abs(s.inner), sqrt(s.diag[0] * s.diag[3]));
    return std::min({Scalar(1), a, b});
}

/// Parses the six-line "key=value" state format:
///   rho11=..  rho22=..  rho33=..  rho44=..  rho14=a+bi  rho23=a+bi
/// Blank lines and '#' comments are skipped.  Errors name the offending line.
TwoQubitXState parse_xstate(std::istream& in);

/// Parses "a", "a+bi", "a-bi", "bi".
std::complex<double> parse_complex(const std::string& text);

}  // namespace fiberdd
