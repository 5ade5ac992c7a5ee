#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace slsamp {

class Problem;

// Composite Gauss-Legendre rule on one interval: `panels` equal panels with a
// fixed 32-point rule each (points parameter kept for convergence testing).
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};

QuadRule gauss_rule(double lo, double hi, int panels = 8, int points = 32);

// One rule per segment of a problem. The weights (1, delta^2, gamma^2) of the
// weighted inner product are NOT folded in here; callers apply them.
struct SegmentGrids {
    std::array<QuadRule, 3> seg;
};

SegmentGrids make_segment_grids(const Problem& p, int panels = 8, int points = 32);

// Deterministic pairwise summation; the reduction tree depends only on n, so
// parallel producers that fill `v` by index give bit-stable totals.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

}  // namespace slsamp
