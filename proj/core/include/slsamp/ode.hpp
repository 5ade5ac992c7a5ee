#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace slsamp {

struct OdeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Scalar>
struct State {
    Scalar u{};
    Scalar up{};
};

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 4'000'000;
};

namespace detail {

inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

}  // namespace detail

// Adaptive embedded Runge-Kutta 5(4), Dormand-Prince coefficients, for the
// system u' = up, up' = (q(x) - lambda) u packaged as a generic rhs. Scalar is
// double or std::complex<double>; the complex instantiation is what the
// characteristic function needs off the real axis.
//
// `nodes` (optional) must be sorted in the direction of integration and lie in
// [x0,x1]; the corresponding states are appended to node_out. Steps land on the
// nodes exactly, so recorded values carry no interpolation error.
template <class Scalar, class Rhs>
State<Scalar> integrate(Rhs&& rhs, double x0, double x1, State<Scalar> y, const OdeOptions& opt,
                        const std::vector<double>* nodes = nullptr,
                        std::vector<State<Scalar>>* node_out = nullptr) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // difference between the 5th and embedded 4th order weights
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double dir = (x1 >= x0) ? 1.0 : -1.0;
    const double span = std::fabs(x1 - x0);
    if (span == 0.0) return y;

    std::size_t node_idx = 0;
    auto next_stop = [&]() {
        if (nodes && node_idx < nodes->size()) return (*nodes)[node_idx];
        return x1;
    };

    double x = x0;
    double h = dir * std::min({span / 16.0, opt.max_step, 1.0});
    State<Scalar> k1 = rhs(x, y);
    long steps = 0;

    while (dir * (x1 - x) > 0.0) {
        double stop = next_stop();
        // node threshold sits above the underflow threshold so a clamped step
        // onto a node can never be mistaken for a failing step size
        if (dir * (stop - x) <= 5e-14 * (1.0 + std::fabs(x))) {
            // already at (or numerically on) the node: record and advance
            if (nodes && node_idx < nodes->size()) {
                if (node_out) node_out->push_back(y);
                ++node_idx;
                continue;
            }
            break;
        }
        if (std::fabs(h) > std::fabs(stop - x)) h = stop - x;
        if (std::fabs(h) > opt.max_step) h = dir * opt.max_step;

        if (++steps > opt.max_steps)
            throw OdeError("integrator exceeded " + std::to_string(opt.max_steps) +
                           " steps at x=" + std::to_string(x));
        if (std::fabs(h) < 1e-14 * (1.0 + std::fabs(x)))
            throw OdeError("step size underflow at x=" + std::to_string(x));

        auto ax = [&](double c) { return x + c * h; };
        State<Scalar> k2 = rhs(ax(c2), {y.u + h * (a21 * k1.u), y.up + h * (a21 * k1.up)});
        State<Scalar> k3 = rhs(ax(c3), {y.u + h * (a31 * k1.u + a32 * k2.u),
                                        y.up + h * (a31 * k1.up + a32 * k2.up)});
        State<Scalar> k4 = rhs(ax(c4), {y.u + h * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
                                        y.up + h * (a41 * k1.up + a42 * k2.up + a43 * k3.up)});
        State<Scalar> k5 =
            rhs(ax(c5), {y.u + h * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
                         y.up + h * (a51 * k1.up + a52 * k2.up + a53 * k3.up + a54 * k4.up)});
        State<Scalar> k6 = rhs(
            x + h, {y.u + h * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u + a65 * k5.u),
                    y.up + h * (a61 * k1.up + a62 * k2.up + a63 * k3.up + a64 * k4.up +
                                a65 * k5.up)});
        State<Scalar> y5{y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
                         y.up + h * (b1 * k1.up + b3 * k3.up + b4 * k4.up + b5 * k5.up +
                                     b6 * k6.up)};
        State<Scalar> k7 = rhs(x + h, y5);
        Scalar err_u = h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
        Scalar err_up =
            h * (e1 * k1.up + e3 * k3.up + e4 * k4.up + e5 * k5.up + e6 * k6.up + e7 * k7.up);

        double su = opt.atol + opt.rtol * std::max(detail::magnitude(y.u), detail::magnitude(y5.u));
        double sp =
            opt.atol + opt.rtol * std::max(detail::magnitude(y.up), detail::magnitude(y5.up));
        double err = std::sqrt(0.5 * (std::pow(detail::magnitude(err_u) / su, 2) +
                                      std::pow(detail::magnitude(err_up) / sp, 2)));

        if (err <= 1.0) {
            x += h;
            y = y5;
            k1 = k7;  // FSAL
            if (!detail::finite(y.u) || !detail::finite(y.up))
                throw OdeError("non-finite state at x=" + std::to_string(x));
            if (nodes && node_idx < nodes->size() &&
                std::fabs(x - (*nodes)[node_idx]) <= 1e-13 * (1.0 + std::fabs(x))) {
                if (node_out) node_out->push_back(y);
                ++node_idx;
            }
        }
        double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        fac = std::clamp(fac, 0.2, 5.0);
        h *= fac;
        if (std::fabs(h) > opt.max_step) h = dir * opt.max_step;
    }
    // trailing nodes that coincide with x1
    while (nodes && node_idx < nodes->size()) {
        if (node_out) node_out->push_back(y);
        ++node_idx;
    }
    return y;
}

}  // namespace slsamp
