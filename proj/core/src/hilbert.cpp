#include "slsamp/hilbert.hpp"

#include <cmath>
#include <stdexcept>

#include "slsamp/eigensolve.hpp"
#include "slsamp/parallel.hpp"

namespace slsamp {

BoundaryFunctionals functionals(const Problem& p, const PiecewiseSolution& s) {
    BoundaryFunctionals r;
    r.Rb = p.alpha1() * s.at_b.u - p.alpha2() * s.at_b.up;
    r.Rbp = p.alpha1p() * s.at_b.u - p.alpha2p() * s.at_b.up;
    r.Rc1 = s.c1m.u;
    r.Rc1p = s.c1m.up - p.delta() * s.c1p.up;
    r.Rc2 = s.c2m.u;
    r.Rc2p = p.delta() * s.c2m.up - p.gamma() * s.c2p.up;
    return r;
}

HVector lift(const Problem& p, const PiecewiseSolution& sol, const SegmentGrids& grids) {
    for (int seg = 0; seg < 3; ++seg)
        if (sol.grid[seg].size() != grids.seg[seg].x.size() ||
            sol.grid[seg].front() != grids.seg[seg].x.front() ||
            sol.grid[seg].back() != grids.seg[seg].x.back())
            throw std::invalid_argument("lift: solution was not shot on the supplied grids");
    HVector F;
    F.f = sol.u;
    auto R = functionals(p, sol);
    F.h1 = R.Rbp;
    F.h2 = R.Rc1;
    F.h3 = R.Rc2;
    return F;
}

double inner_product(const Problem& p, const SegmentGrids& grids, const HVector& F,
                     const HVector& G) {
    const double wseg[3] = {1.0, p.delta() * p.delta(), p.gamma() * p.gamma()};
    double integral = 0.0;
    std::vector<double> terms;
    for (int seg = 0; seg < 3; ++seg) {
        const auto& r = grids.seg[seg];
        if (F.f[seg].size() != r.x.size() || G.f[seg].size() != r.x.size())
            throw std::invalid_argument("inner_product: value arrays do not match the grids");
        terms.resize(r.x.size());
        for (std::size_t i = 0; i < r.x.size(); ++i)
            terms[i] = r.w[i] * F.f[seg][i] * G.f[seg][i];
        integral += wseg[seg] * pairwise_sum(terms);
    }
    const double g2 = p.gamma() * p.gamma();
    double discrete = (g2 / p.rho()) * F.h1 * G.h1 + F.h2 * G.h2 + p.delta() * F.h3 * G.h3;
    return integral - discrete;
}

NormInfo eigenvector_pairing(const Problem& p, const SegmentGrids& grids,
                             const PiecewiseSolution& phi) {
    HVector F = lift(p, phi, grids);
    double v = inner_product(p, grids, F, F);
    if (v == 0.0) throw std::runtime_error("eigenvector_pairing: zero self pairing");
    NormInfo n;
    n.self_pairing = v;
    n.metric_sign = v > 0 ? 1 : -1;
    n.norm = std::sqrt(std::fabs(v));
    return n;
}

double eigenvector_norm(const Problem& p, const SegmentGrids& grids,
                        const PiecewiseSolution& phi) {
    return eigenvector_pairing(p, grids, phi).norm;
}

std::vector<std::vector<double>> orthogonality_matrix(const Problem& p, const Spectrum& spec,
                                                      int n, int panels, const ShootOptions& opt) {
    if (n > static_cast<int>(spec.entries.size()))
        throw std::invalid_argument("orthogonality_matrix: spectrum has fewer entries than n");
    SegmentGrids grids = make_segment_grids(p, panels);
    std::vector<HVector> vecs(n);
    std::vector<double> norms(n);
    parallel_for(std::size_t(n), [&](std::size_t i) {
        auto phi = shoot_left(p, spec.entries[i].lambda, opt, &grids);
        vecs[i] = lift(p, phi, grids);
        double v = inner_product(p, grids, vecs[i], vecs[i]);
        norms[i] = std::sqrt(std::fabs(v));
    });
    std::vector<std::vector<double>> G(n, std::vector<double>(n, 0.0));
    parallel_for(std::size_t(n), [&](std::size_t i) {
        for (std::size_t j = i; j < std::size_t(n); ++j) {
            double v = inner_product(p, grids, vecs[i], vecs[j]) / (norms[i] * norms[j]);
            G[i][j] = v;
            G[j][i] = v;
        }
    });
    return G;
}

}  // namespace slsamp
