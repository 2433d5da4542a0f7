#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on a caller-supplied
// set of initial panels.  Panels are bisected in order of largest error
// estimate until the summed error meets the tolerance or the panel budget
// runs out.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberdd {

struct QuadratureOptions {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    // Largest number of panels kept alive at once, initial panels included.
    std::size_t max_panels = 2'000'000;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;

    double tolerance(const QuadratureOptions& opts) const {
        return std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    }
};

/// Thrown when the panel budget is exhausted before the error target is met.
/// Carries the best estimate and the error bound actually achieved.
class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const QuadratureResult& best)
        : std::runtime_error(describe(best)), best_(best) {}

    const QuadratureResult& best() const noexcept { return best_; }

private:
    static std::string describe(const QuadratureResult& r) {
        std::ostringstream os;
        os.precision(6);
        os << "quadrature did not converge: estimate " << r.value << ", achieved error "
           << r.abs_error << " after " << r.evaluations << " evaluations";
        return os.str();
    }
    QuadratureResult best_;
};

namespace detail {

// Kronrod abscissae (descending) and weights; Gauss weights for the odd
// Kronrod nodes 1, 3, 5 and the centre.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class Func>
Panel gauss_kronrod15(const Func& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over the union of consecutive panels [edges[i], edges[i+1]].
/// Returns a non-converged result instead of throwing; see integrate().
template <class Func>
QuadratureResult integrate_panels(const Func& f, std::span<const double> edges,
                                  const QuadratureOptions& opts = {}) {
    QuadratureResult result;
    if (edges.size() < 2) return result;

    std::priority_queue<detail::Panel> heap;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i] < edges[i + 1]))
            throw std::invalid_argument("integrate_panels: edges must be strictly increasing");
        auto p = detail::gauss_kronrod15(f, edges[i], edges[i + 1]);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    result.evaluations = 15 * heap.size();

    auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(value)); };
    while (error > target() && !heap.empty()) {
        if (heap.size() >= opts.max_panels) break;
        const detail::Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) break;  // panel at machine resolution
        heap.pop();
        const auto left = detail::gauss_kronrod15(f, worst.a, mid);
        const auto right = detail::gauss_kronrod15(f, mid, worst.b);
        result.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the surviving panels so the running-update drift does not leak out.
    value = 0.0;
    error = 0.0;
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& l, const detail::Panel& r) { return l.a < r.a; });
    for (const auto& p : panels) {
        value += p.value;
        error += p.error;
    }
    result.value = value;
    result.abs_error = error;
    result.converged = error <= result.tolerance(opts);
    return result;
}

/// As integrate_panels(), but throws QuadratureError when the target is missed.
template <class Func>
QuadratureResult integrate(const Func& f, std::span<const double> edges,
                           const QuadratureOptions& opts = {}) {
    auto r = integrate_panels(f, edges, opts);
    if (!r.converged) throw QuadratureError(r);
    return r;
}

/// Panel edges on [lo, hi] that grow geometrically (factor 2) from lo until the
/// width reaches max_width, then continue with constant width max_width.
/// The geometric start resolves power-law behaviour near an infrared cutoff.
inline std::vector<double> graded_edges(double lo, double hi, double max_width) {
    if (!(lo > 0.0) || !(hi > lo) || !(max_width > 0.0))
        throw std::invalid_argument("graded_edges: need 0 < lo < hi and max_width > 0");
    std::vector<double> edges{lo};
    double x = lo;
    while (x < hi) {
        const double step = std::min(x, max_width);
        double next = x + step;
        // Avoid a sliver at the top end.
        if (next > hi || hi - next < 1e-3 * step) next = hi;
        edges.push_back(next);
        x = next;
    }
    return edges;
}

}  // namespace fiberdd
