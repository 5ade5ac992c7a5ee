#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "slsamp/ode.hpp"
#include "slsamp/problem.hpp"
#include "slsamp/quadrature.hpp"

namespace slsamp {

enum class Side { left, right };

// Dense record of a shooting solution. Segment grids are ascending regardless
// of integration direction; one-sided limit states at the interior points and
// the endpoint states are always present. The left solution satisfies the
// left boundary condition by construction, the right one the lambda-dependent
// right condition; both satisfy the four transmission relations because the
// jump maps are applied exactly.
template <class Scalar>
struct PiecewiseSolutionT {
    Scalar lambda{};
    Side side = Side::left;
    std::array<std::vector<double>, 3> grid;
    std::array<std::vector<Scalar>, 3> u;
    std::array<std::vector<Scalar>, 3> up;
    State<Scalar> at_a, c1m, c1p, c2m, c2p, at_b;
};

using PiecewiseSolution = PiecewiseSolutionT<double>;
using PiecewiseSolutionC = PiecewiseSolutionT<std::complex<double>>;

struct ShootOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    // at least this many dense points per segment when no grid is supplied
    int min_dense = 64;
};

// Left solution phi: u(a)=beta2, u'(a)=-beta1, jump maps
//   at c1:  u+ = u-/delta,            u+' = (u-' + lambda u-)/delta
//   at c2:  u+ = (delta/gamma) u-,    u+' = (delta u-' + lambda u-)/gamma
// Right solution chi (backward from b): u(b)=lambda a2'-a2, u'(b)=lambda a1'-a1,
//   at c2:  u- = (gamma/delta) u+,    u-' = (gamma/delta)(u+' - (lambda/delta) u+)
//   at c1:  u- = delta u+,            u-' = delta (u+' - lambda u+)
PiecewiseSolution shoot_left(const Problem& p, double lambda, const ShootOptions& opt = {},
                             const SegmentGrids* dense = nullptr);
PiecewiseSolution shoot_right(const Problem& p, double lambda, const ShootOptions& opt = {},
                              const SegmentGrids* dense = nullptr);
PiecewiseSolutionC shoot_left_c(const Problem& p, std::complex<double> lambda,
                                const ShootOptions& opt = {}, const SegmentGrids* dense = nullptr);

// Wronskian phi chi' - phi' chi at x, from the segment containing x, using
// cubic Hermite interpolation of the dense records. Throws on mismatched
// lambda. Constant per segment for solutions of the same equation.
double wronskian(const PiecewiseSolution& left, const PiecewiseSolution& right, double x);

// The three per-segment Wronskians with their jump weights (1, delta^2,
// gamma^2) applied; all equal the characteristic function.
std::array<double, 3> wronskian_chain(const Problem& p, double lambda,
                                      const ShootOptions& opt = {});

// Characteristic function from a single left shoot:
//   omega(lambda) = gamma^2 { (lambda a1' - a1) u(b) - (lambda a2' - a2) u'(b) }.
// Real for real lambda; entire in lambda.
double omega(const Problem& p, double lambda, const ShootOptions& opt = {});
std::complex<double> omega_c(const Problem& p, std::complex<double> lambda,
                             const ShootOptions& opt = {});

// Rescaled variant for scanning: the state is renormalized at each segment
// entry and the accumulated log scale is tracked, so the sign and a bounded
// mantissa survive regimes where omega itself spans many orders of magnitude.
// omega = mantissa * exp(log_scale); scan_value = mantissa / (1 + |lambda|).
struct ScaledOmega {
    double mantissa = 0;
    double log_scale = 0;
    double scan_value = 0;
};
ScaledOmega omega_rescaled(const Problem& p, double lambda, const ShootOptions& opt = {});

// Central difference with one Richardson step. h <= 0 picks the default
// 1e-6*(1+|lambda|). Near-degenerate roots need a caller-capped h (the
// eigensolver caps it at a quarter of the gap to the nearest other root).
double omega_derivative(const Problem& p, double lambda, double h = 0.0,
                        const ShootOptions& opt = {});
std::complex<double> omega_derivative_c(const Problem& p, std::complex<double> lambda,
                                        double h = 0.0, const ShootOptions& opt = {});

// (f(x+h)-f(x-h))/2h with one Richardson extrapolation step; exact on cubics.
double central_derivative(const std::function<double(double)>& f, double x, double h);

// Transmission/boundary residuals of a computed solution, each scaled by
// (1 + max state magnitude) of the states entering it. For diagnostics.
struct Residuals {
    double b1, b2;          // boundary forms
    double t1, t2, t3, t4;  // transmission forms
};
Residuals boundary_residuals(const Problem& p, const PiecewiseSolution& sol);

}  // namespace slsamp
