#include "slsamp/shooting.hpp"

#include <algorithm>
#include <cmath>

namespace slsamp {

namespace {

template <class Scalar>
struct SegRhs {
    const Problem* p;
    int seg;
    Scalar lambda;
    State<Scalar> operator()(double x, State<Scalar> y) const {
        return {y.up, (p->q(seg, x) - lambda) * y.u};
    }
};

// complex * double etc. promote naturally; this helper keeps the jump algebra
// readable for both instantiations
template <class Scalar>
void run_segment(const Problem& p, int seg, Scalar lambda, bool forward, State<Scalar>& y,
                 const ShootOptions& opt, const QuadRule* dense,
                 PiecewiseSolutionT<Scalar>* out) {
    const double lo = p.seg_lo(seg), hi = p.seg_hi(seg);
    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    std::vector<double> nodes;
    if (dense) {
        nodes = dense->x;
    } else if (out) {
        int n = std::max(2, opt.min_dense);
        nodes.resize(n);
        for (int i = 0; i < n; ++i) nodes[i] = lo + (hi - lo) * i / (n - 1);
    }
    if (!forward) std::reverse(nodes.begin(), nodes.end());

    std::vector<State<Scalar>> vals;
    vals.reserve(nodes.size());
    SegRhs<Scalar> rhs{&p, seg, lambda};
    double x0 = forward ? lo : hi;
    double x1 = forward ? hi : lo;
    y = integrate(rhs, x0, x1, y, oo, out ? &nodes : nullptr, out ? &vals : nullptr);

    if (out) {
        if (!forward) {
            std::reverse(nodes.begin(), nodes.end());
            std::reverse(vals.begin(), vals.end());
        }
        out->grid[seg] = std::move(nodes);
        out->u[seg].resize(vals.size());
        out->up[seg].resize(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            out->u[seg][i] = vals[i].u;
            out->up[seg][i] = vals[i].up;
        }
    }
}

template <class Scalar>
PiecewiseSolutionT<Scalar> shoot_left_impl(const Problem& p, Scalar lam, const ShootOptions& opt,
                                           const SegmentGrids* dense, bool want_dense) {
    PiecewiseSolutionT<Scalar> sol;
    sol.lambda = lam;
    sol.side = Side::left;
    PiecewiseSolutionT<Scalar>* rec = want_dense ? &sol : nullptr;

    State<Scalar> y{Scalar(p.beta2()), Scalar(-p.beta1())};
    sol.at_a = y;
    run_segment(p, 0, lam, true, y, opt, dense ? &dense->seg[0] : nullptr, rec);
    sol.c1m = y;
    y = {y.u / p.delta(), (y.up + lam * y.u) / p.delta()};
    sol.c1p = y;
    run_segment(p, 1, lam, true, y, opt, dense ? &dense->seg[1] : nullptr, rec);
    sol.c2m = y;
    y = {(p.delta() / p.gamma()) * y.u, (p.delta() * y.up + lam * y.u) / p.gamma()};
    sol.c2p = y;
    run_segment(p, 2, lam, true, y, opt, dense ? &dense->seg[2] : nullptr, rec);
    sol.at_b = y;
    return sol;
}

template <class Scalar>
PiecewiseSolutionT<Scalar> shoot_right_impl(const Problem& p, Scalar lam, const ShootOptions& opt,
                                            const SegmentGrids* dense, bool want_dense) {
    PiecewiseSolutionT<Scalar> sol;
    sol.lambda = lam;
    sol.side = Side::right;
    PiecewiseSolutionT<Scalar>* rec = want_dense ? &sol : nullptr;

    State<Scalar> y{lam * p.alpha2p() - p.alpha2(), lam * p.alpha1p() - p.alpha1()};
    sol.at_b = y;
    run_segment(p, 2, lam, false, y, opt, dense ? &dense->seg[2] : nullptr, rec);
    sol.c2p = y;
    y = {(p.gamma() / p.delta()) * y.u,
         (p.gamma() / p.delta()) * (y.up - (lam / p.delta()) * y.u)};
    sol.c2m = y;
    run_segment(p, 1, lam, false, y, opt, dense ? &dense->seg[1] : nullptr, rec);
    sol.c1p = y;
    y = {p.delta() * y.u, p.delta() * (y.up - lam * y.u)};
    sol.c1m = y;
    run_segment(p, 0, lam, false, y, opt, dense ? &dense->seg[0] : nullptr, rec);
    sol.at_a = y;
    return sol;
}

template <class Scalar>
Scalar omega_impl(const Problem& p, Scalar lam, const ShootOptions& opt) {
    auto sol = shoot_left_impl<Scalar>(p, lam, opt, nullptr, false);
    const double g2 = p.gamma() * p.gamma();
    return g2 * ((lam * p.alpha1p() - p.alpha1()) * sol.at_b.u -
                 (lam * p.alpha2p() - p.alpha2()) * sol.at_b.up);
}

}  // namespace

PiecewiseSolution shoot_left(const Problem& p, double lambda, const ShootOptions& opt,
                             const SegmentGrids* dense) {
    return shoot_left_impl<double>(p, lambda, opt, dense, true);
}

PiecewiseSolution shoot_right(const Problem& p, double lambda, const ShootOptions& opt,
                              const SegmentGrids* dense) {
    return shoot_right_impl<double>(p, lambda, opt, dense, true);
}

PiecewiseSolutionC shoot_left_c(const Problem& p, std::complex<double> lambda,
                                const ShootOptions& opt, const SegmentGrids* dense) {
    return shoot_left_impl<std::complex<double>>(p, lambda, opt, dense, true);
}

namespace {

// cubic Hermite from the two dense nodes bracketing x
void interp_state(const PiecewiseSolution& s, int seg, double x, double& u, double& up) {
    const auto& g = s.grid[seg];
    auto it = std::upper_bound(g.begin(), g.end(), x);
    std::size_t i = (it == g.begin()) ? 0 : std::size_t(it - g.begin()) - 1;
    if (i + 1 >= g.size()) i = g.size() - 2;
    double h = g[i + 1] - g[i];
    double t = (x - g[i]) / h;
    double u0 = s.u[seg][i], u1 = s.u[seg][i + 1];
    double m0 = s.up[seg][i], m1 = s.up[seg][i + 1];
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    u = h00 * u0 + h10 * h * m0 + h01 * u1 + h11 * h * m1;
    // derivative of the Hermite polynomial; m is u'' only through the ODE, so
    // differentiate the interpolant rather than interpolating up separately
    double d00 = (6 * t * t - 6 * t) / h, d10 = 3 * t * t - 4 * t + 1;
    double d01 = (6 * t - 6 * t * t) / h, d11 = 3 * t * t - 2 * t;
    up = d00 * u0 + d10 * m0 + d01 * u1 + d11 * m1;
}

}  // namespace

double wronskian(const PiecewiseSolution& left, const PiecewiseSolution& right, double x) {
    if (left.lambda != right.lambda)
        throw std::invalid_argument("wronskian: solutions computed at different lambda");
    // pick the segment whose dense grid covers x; fall back to the nearest one
    // for the sliver between Gauss grids and the true segment boundary
    int seg = 2;
    if (x <= left.grid[0].back()) {
        seg = 0;
    } else if (x < left.grid[1].front()) {
        seg = (x - left.grid[0].back() < left.grid[1].front() - x) ? 0 : 1;
    } else if (x <= left.grid[1].back()) {
        seg = 1;
    } else if (x < left.grid[2].front()) {
        seg = (x - left.grid[1].back() < left.grid[2].front() - x) ? 1 : 2;
    }
    double fu, fup, gu, gup;
    interp_state(left, seg, x, fu, fup);
    interp_state(right, seg, x, gu, gup);
    return fu * gup - fup * gu;
}

std::array<double, 3> wronskian_chain(const Problem& p, double lambda, const ShootOptions& opt) {
    auto phi = shoot_left(p, lambda, opt);
    auto chi = shoot_right(p, lambda, opt);
    std::array<double, 3> w;
    const double d2 = p.delta() * p.delta();
    const double g2 = p.gamma() * p.gamma();
    const double weight[3] = {1.0, d2, g2};
    for (int seg = 0; seg < 3; ++seg) {
        double x = 0.5 * (p.seg_lo(seg) + p.seg_hi(seg));
        w[seg] = weight[seg] * wronskian(phi, chi, x);
    }
    return w;
}

double omega(const Problem& p, double lambda, const ShootOptions& opt) {
    return omega_impl<double>(p, lambda, opt);
}

std::complex<double> omega_c(const Problem& p, std::complex<double> lambda,
                             const ShootOptions& opt) {
    return omega_impl<std::complex<double>>(p, lambda, opt);
}

ScaledOmega omega_rescaled(const Problem& p, double lambda, const ShootOptions& opt) {
    // same propagation as omega() but with a per-segment renormalization
    State<double> y{p.beta2(), -p.beta1()};
    double log_scale = 0.0;
    auto renorm = [&]() {
        double m = std::max(std::fabs(y.u), std::fabs(y.up));
        if (m > 0.0 && std::isfinite(m)) {
            y.u /= m;
            y.up /= m;
            log_scale += std::log(m);
        }
    };
    OdeOptions oo;
    oo.rtol = opt.rtol;
    oo.atol = opt.atol;
    for (int seg = 0; seg < 3; ++seg) {
        renorm();
        SegRhs<double> rhs{&p, seg, lambda};
        y = integrate(rhs, p.seg_lo(seg), p.seg_hi(seg), y, oo);
        if (seg == 0) y = {y.u / p.delta(), (y.up + lambda * y.u) / p.delta()};
        if (seg == 1)
            y = {(p.delta() / p.gamma()) * y.u, (p.delta() * y.up + lambda * y.u) / p.gamma()};
    }
    const double g2 = p.gamma() * p.gamma();
    ScaledOmega r;
    r.mantissa = g2 * ((lambda * p.alpha1p() - p.alpha1()) * y.u -
                       (lambda * p.alpha2p() - p.alpha2()) * y.up);
    r.log_scale = log_scale;
    r.scan_value = r.mantissa / (1.0 + std::fabs(lambda));
    return r;
}

double central_derivative(const std::function<double(double)>& f, double x, double h) {
    double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

double omega_derivative(const Problem& p, double lambda, double h, const ShootOptions& opt) {
    if (h <= 0.0) h = 1e-6 * (1.0 + std::fabs(lambda));
    return central_derivative([&](double l) { return omega(p, l, opt); }, lambda, h);
}

std::complex<double> omega_derivative_c(const Problem& p, std::complex<double> lambda, double h,
                                        const ShootOptions& opt) {
    if (h <= 0.0) h = 1e-6 * (1.0 + std::abs(lambda));
    auto f = [&](std::complex<double> z) { return omega_c(p, z, opt); };
    std::complex<double> hh{h, 0.0};
    auto d1 = (f(lambda + hh) - f(lambda - hh)) / (2.0 * h);
    auto d2 = (f(lambda + 0.5 * hh) - f(lambda - 0.5 * hh)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

Residuals boundary_residuals(const Problem& p, const PiecewiseSolution& s) {
    auto scale = [](std::initializer_list<double> vs) {
        double m = 1.0;
        for (double v : vs) m = std::max(m, std::fabs(v));
        return m;
    };
    const double lam = s.lambda;
    Residuals r;
    r.b1 = (p.beta1() * s.at_a.u + p.beta2() * s.at_a.up) / scale({s.at_a.u, s.at_a.up});
    double rb = p.alpha1() * s.at_b.u - p.alpha2() * s.at_b.up;
    double rbp = p.alpha1p() * s.at_b.u - p.alpha2p() * s.at_b.up;
    r.b2 = (lam * rbp - rb) / scale({lam * rbp, rb, s.at_b.u, s.at_b.up});
    r.t1 = (s.c1m.u - p.delta() * s.c1p.u) / scale({s.c1m.u, s.c1p.u});
    r.t2 = (s.c1m.up - p.delta() * s.c1p.up + lam * s.c1m.u) /
           scale({s.c1m.up, s.c1p.up, lam * s.c1m.u});
    r.t3 = (p.delta() * s.c2m.u - p.gamma() * s.c2p.u) / scale({s.c2m.u, s.c2p.u});
    r.t4 = (p.delta() * s.c2m.up - p.gamma() * s.c2p.up + lam * s.c2m.u) /
           scale({s.c2m.up, s.c2p.up, lam * s.c2m.u});
    return r;
}

}  // namespace slsamp
