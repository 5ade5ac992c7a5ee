#include "slsamp/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "slsamp/problem.hpp"

namespace slsamp {

namespace {

// 32-point Gauss-Legendre nodes/weights on [-1,1]
static constexpr double kGl32X[32] = {
    -0.99726386184948157, -0.98561151154526838, -0.96476225558750639, -0.93490607593773967,
    -0.8963211557660522,  -0.84936761373256997, -0.79448379596794239, -0.73218211874028971,
    -0.66304426693021523, -0.5877157572407623,  -0.50689990893222936, -0.42135127613063533,
    -0.33186860228212767, -0.23928736225213706, -0.14447196158279649, -0.04830766568773831,
    0.04830766568773831,  0.14447196158279649,  0.23928736225213706,  0.33186860228212767,
    0.42135127613063533,  0.50689990893222936,  0.5877157572407623,   0.66304426693021523,
    0.73218211874028971,  0.79448379596794239,  0.84936761373256997,  0.8963211557660522,
    0.93490607593773967,  0.96476225558750639,  0.98561151154526838,  0.99726386184948157,
};
static constexpr double kGl32W[32] = {
    0.0070186100094692984, 0.016274394730905965, 0.025392065309262427, 0.034273862913021626,
    0.042835898022226426,  0.050998059262376244, 0.058684093478535704, 0.065822222776361752,
    0.072345794108848449,  0.078193895787070311, 0.083311924226946846, 0.087652093004403908,
    0.091173878695763863,  0.093844399080804566, 0.095638720079274833, 0.096540088514727812,
    0.096540088514727812,  0.095638720079274833, 0.093844399080804566, 0.091173878695763863,
    0.087652093004403908,  0.083311924226946846, 0.078193895787070311, 0.072345794108848449,
    0.065822222776361752,  0.058684093478535704, 0.050998059262376244, 0.042835898022226426,
    0.034273862913021626,  0.025392065309262427, 0.016274394730905965, 0.0070186100094692984,
};

// Newton iteration on P_n for rules other than the tabled 32-point one
void gauss_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double step = p1 / dp;
            t -= step;
            if (std::fabs(step) < 1e-15) break;
        }
        x[n - 1 - i] = t;
        w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

QuadRule gauss_rule(double lo, double hi, int panels, int points) {
    if (panels < 1 || points < 2) throw std::invalid_argument("gauss_rule: bad panel/point count");
    std::vector<double> bx, bw;
    const double* px = kGl32X;
    const double* pw = kGl32W;
    if (points != 32) {
        gauss_nodes(points, bx, bw);
        px = bx.data();
        pw = bw.data();
    }
    QuadRule r;
    r.x.reserve(std::size_t(panels) * points);
    r.w.reserve(std::size_t(panels) * points);
    for (int p = 0; p < panels; ++p) {
        double plo = lo + (hi - lo) * p / panels;
        double phi = lo + (hi - lo) * (p + 1) / panels;
        double mid = 0.5 * (plo + phi), half = 0.5 * (phi - plo);
        for (int i = 0; i < points; ++i) {
            r.x.push_back(mid + half * px[i]);
            r.w.push_back(half * pw[i]);
        }
    }
    return r;
}

SegmentGrids make_segment_grids(const Problem& p, int panels, int points) {
    SegmentGrids g;
    for (int s = 0; s < 3; ++s) g.seg[s] = gauss_rule(p.seg_lo(s), p.seg_hi(s), panels, points);
    return g;
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace slsamp
