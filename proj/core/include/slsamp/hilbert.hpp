#pragma once

#include <vector>

#include "slsamp/problem.hpp"
#include "slsamp/quadrature.hpp"
#include "slsamp/shooting.hpp"

namespace slsamp {

struct SpectrumEntry;
struct Spectrum;

// Element of the weighted space: a piecewise function (values on the segment
// quadrature grids) plus three scalar components.
struct HVector {
    std::array<std::vector<double>, 3> f;
    double h1 = 0, h2 = 0, h3 = 0;
};

struct BoundaryFunctionals {
    double Rb, Rbp, Rc1, Rc1p, Rc2, Rc2p;
};

// Rb  = a1 u(b)  - a2 u'(b)        Rbp  = a1' u(b) - a2' u'(b)
// Rc1 = u(c1-)                     Rc1p = u'(c1-) - delta u'(c1+)
// Rc2 = u(c2-)                     Rc2p = delta u'(c2-) - gamma u'(c2+)
// For a left solution Rc1p = -lambda Rc1 and Rc2p = -lambda Rc2; for a right
// solution lambda Rbp - Rb = 0. Both follow from the construction.
BoundaryFunctionals functionals(const Problem& p, const PiecewiseSolution& sol);

// Eigenvector lift: F = (f, Rbp(f), Rc1(f), Rc2(f)) with f the dense solution
// values on the supplied grids.
HVector lift(const Problem& p, const PiecewiseSolution& sol, const SegmentGrids& grids);

// The invariant pairing of the space:
//   <F,G> = int_1 fg + delta^2 int_2 fg + gamma^2 int_3 fg
//           - (gamma^2/rho) h1 k1 - h2 k2 - delta h3 k3.
// The discrete weights' magnitudes (gamma^2/rho, 1, delta) are what the jump
// algebra dictates; their sign is the one that makes the pairing invariant
// under the transmission maps, which is checked empirically by the
// orthogonality suite. The pairing is indefinite: vectors with nonzero scalar
// components can have negative self-pairing. For plain functions (h = 0) it
// is the ordinary weighted L^2 product and positive definite.
double inner_product(const Problem& p, const SegmentGrids& grids, const HVector& F,
                     const HVector& G);

struct NormInfo {
    double norm;          // sqrt(|self_pairing|), always > 0 for eigenvectors
    int metric_sign;      // sign of the self pairing, +1 or -1
    double self_pairing;  // <Phi,Phi>
};

NormInfo eigenvector_pairing(const Problem& p, const SegmentGrids& grids,
                             const PiecewiseSolution& phi);
double eigenvector_norm(const Problem& p, const SegmentGrids& grids, const PiecewiseSolution& phi);

// Gram matrix of the first n eigenvectors normalized by modulus norms.
// Off-diagonal entries vanish to quadrature accuracy; diagonal entries are +-1
// (the metric sign of each mode).
std::vector<std::vector<double>> orthogonality_matrix(const Problem& p, const Spectrum& spec,
                                                      int n, int panels = 8,
                                                      const ShootOptions& opt = {});

}  // namespace slsamp
