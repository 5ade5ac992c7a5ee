#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "slsamp/eigensolve.hpp"
#include "slsamp/hilbert.hpp"
#include "slsamp/quadrature.hpp"
#include "slsamp/shooting.hpp"

using namespace slsamp;

namespace {

const Spectrum& p0_spec() {
    static Spectrum s = compute_spectrum(testfix::p0(), 10);
    return s;
}

const Spectrum& qx_spec() {
    static Spectrum s = compute_spectrum(testfix::qx(), 10);
    return s;
}

}  // namespace

TEST_CASE("Gauss rule integrates high degree polynomials exactly") {
    QuadRule r = gauss_rule(0.0, 1.0, 1, 32);
    double sum63 = 0.0, sum10 = 0.0, len = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        sum63 += r.w[i] * std::pow(r.x[i], 63);
        sum10 += r.w[i] * std::pow(r.x[i], 10);
        len += r.w[i];
    }
    CHECK(sum63 == doctest::Approx(1.0 / 64.0).epsilon(1e-13));
    CHECK(sum10 == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
    CHECK(len == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("segment grids cover their segments") {
    Problem p = testfix::p0();
    SegmentGrids g = make_segment_grids(p);
    for (int s = 0; s < 3; ++s) {
        double wsum = 0.0;
        for (std::size_t i = 0; i < g.seg[s].x.size(); ++i) {
            CHECK(g.seg[s].x[i] >= p.seg_lo(s));
            CHECK(g.seg[s].x[i] <= p.seg_hi(s));
            wsum += g.seg[s].w[i];
        }
        CHECK(wsum == doctest::Approx(p.seg_len(s)).epsilon(1e-14));
    }
}

TEST_CASE("pairwise summation is deterministic and correct") {
    std::vector<double> v;
    for (int i = 1; i <= 1000; ++i) v.push_back(double(i));
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(pairwise_sum(v.data(), v.size()) == pairwise_sum(v));
    CHECK(pairwise_sum(v.data(), 0) == 0.0);
}

TEST_CASE("boundary functionals obey the construction identities") {
    Problem p = testfix::qx();
    const double lam = 7.7;
    PiecewiseSolution phi = shoot_left(p, lam);
    BoundaryFunctionals f = functionals(p, phi);
    double scale = 1.0 + std::fabs(f.Rc1) + std::fabs(f.Rc2);
    CHECK(std::fabs(f.Rc1p + lam * f.Rc1) / scale < 1e-12);
    CHECK(std::fabs(f.Rc2p + lam * f.Rc2) / scale < 1e-12);
    PiecewiseSolution chi = shoot_right(p, lam);
    BoundaryFunctionals fr = functionals(p, chi);
    CHECK(std::fabs(lam * fr.Rbp - fr.Rb) / (1.0 + std::fabs(fr.Rb)) < 1e-12);
}

TEST_CASE("lift stores the three scalar components") {
    Problem p = testfix::p0();
    SegmentGrids grids = make_segment_grids(p);
    PiecewiseSolution phi = shoot_left(p, p0_spec().entries[2].lambda, {}, &grids);
    BoundaryFunctionals f = functionals(p, phi);
    HVector F = lift(p, phi, grids);
    CHECK(F.h1 == f.Rbp);
    CHECK(F.h2 == f.Rc1);
    CHECK(F.h3 == f.Rc2);
    for (int s = 0; s < 3; ++s) CHECK(F.f[s].size() == grids.seg[s].x.size());
}

TEST_CASE("eigenvectors of distinct eigenvalues are orthogonal") {
    auto G = orthogonality_matrix(testfix::p0(), p0_spec(), 10);
    double off = 0.0;
    int negatives = 0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            if (i == j) continue;
            off = std::max(off, std::fabs(G[i][j]));
        }
        CHECK(std::fabs(std::fabs(G[i][i]) - 1.0) < 1e-12);
        negatives += G[i][i] < 0 ? 1 : 0;
    }
    CHECK(off < 1e-6);
    // indefinite metric: two real modes carry negative self pairing, the
    // remaining negative square lives on the nonreal pair
    CHECK(negatives == 2);
}

TEST_CASE("orthogonality for the linear potential variant") {
    auto G = orthogonality_matrix(testfix::qx(), qx_spec(), 10);
    double off = 0.0;
    int negatives = 0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j)
            if (i != j) off = std::max(off, std::fabs(G[i][j]));
        negatives += G[i][i] < 0 ? 1 : 0;
    }
    CHECK(off < 1e-5);
    // no nonreal pair here; all three negative squares sit on real modes
    CHECK(negatives == 3);
}

TEST_CASE("the integral part equals the discrete part for distinct modes") {
    Problem p = testfix::p0();
    SegmentGrids grids = make_segment_grids(p);
    const Spectrum& spec = p0_spec();
    double max_int = 0.0;
    for (auto [m, n] : std::vector<std::pair<int, int>>{{0, 2}, {2, 3}, {1, 4}, {3, 5}}) {
        PiecewiseSolution pm = shoot_left(p, spec.entries[std::size_t(m)].lambda, {}, &grids);
        PiecewiseSolution pn = shoot_left(p, spec.entries[std::size_t(n)].lambda, {}, &grids);
        HVector Fm = lift(p, pm, grids), Fn = lift(p, pn, grids);
        double full = inner_product(p, grids, Fm, Fn);
        HVector Fm0 = Fm, Fn0 = Fn;
        Fm0.h1 = Fm0.h2 = Fm0.h3 = 0;
        Fn0.h1 = Fn0.h2 = Fn0.h3 = 0;
        double integral = inner_product(p, grids, Fm0, Fn0);
        double nm = eigenvector_norm(p, grids, pm) * eigenvector_norm(p, grids, pn);
        // full pairing vanishes, so the weighted integrals must exactly
        // balance the discrete boundary terms
        CHECK(std::fabs(full) / nm < 1e-7);
        max_int = std::max(max_int, std::fabs(integral) / nm);
    }
    // and that balance is not vacuous: the discrete part is substantial
    CHECK(max_int > 1e-3);
}

TEST_CASE("self pairing ties to the characteristic derivative") {
    // <Phi_n, Phi_n> = -omega'(lambda_n) Rbp(phi_n) / rho is what makes the
    // sampling weights computable from shooting data alone
    for (const Problem& p : {testfix::p0(), testfix::qx()}) {
        Spectrum spec = compute_spectrum(p, 6);
        SegmentGrids grids = make_segment_grids(p);
        for (int n = 0; n < 6; ++n) {
            const auto& e = spec.entries[std::size_t(n)];
            PiecewiseSolution phi = shoot_left(p, e.lambda, {}, &grids);
            NormInfo info = eigenvector_pairing(p, grids, phi);
            double predicted = -e.omega_prime * functionals(p, phi).Rbp / p.rho();
            CHECK(info.self_pairing ==
                  doctest::Approx(predicted).epsilon(1e-7));
            CHECK(info.norm == doctest::Approx(std::sqrt(std::fabs(info.self_pairing)))
                                   .epsilon(1e-12));
            CHECK(info.metric_sign == (info.self_pairing < 0 ? -1 : 1));
        }
    }
}
