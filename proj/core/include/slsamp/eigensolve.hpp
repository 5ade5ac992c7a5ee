#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "slsamp/problem.hpp"
#include "slsamp/shooting.hpp"

namespace slsamp {

struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LatticeFamily { A, B, C, AB, AC, BC, ABC, none };
const char* lattice_family_name(LatticeFamily f);

struct Seed {
    double s = 0;
    LatticeFamily family = LatticeFamily::none;
    bool collided = false;  // another family's seed was merged into this one
};

// The three s-lattices (n+1/2)pi/(c1-a), n pi/(c2-c1), (n+1/2)pi/(b-c2); the
// middle family starts at n=1 (n=0 would be s=0). Merged, sorted, seeds closer
// than a tolerance deduplicated and flagged.
std::vector<Seed> asymptotic_seeds(const Problem& p, int n_max);

struct Bracket {
    double lo = 0, hi = 0;
};

struct SolverOptions {
    double tol_ode = 1e-10;
    double tol_root = 1e-12;
    double lambda_min = std::numeric_limits<double>::quiet_NaN();  // NaN: automatic floor
    double lambda_max = std::numeric_limits<double>::quiet_NaN();  // NaN: grow as needed
    // base scan density in s; collided-seed windows are refined 8x on top of
    // this, and dips that still hide both roots of a tight pair are split by
    // line minimization, so the base grid only has to catch isolated roots
    int grid_per_unit_s = 50;
    bool pair_search = true;
    ShootOptions shoot() const {
        ShootOptions o;
        o.rtol = tol_ode;
        o.atol = tol_ode * 1e-2;
        return o;
    }
};

// Sign-change brackets of the rescaled characteristic function over
// [lambda_min, lambda_max]. `grid` is the minimum number of evaluation points;
// the grid is refined around asymptotic seeds (local spacing at most a quarter
// of the local seed gap, and 8x finer around collided seeds) and near-zero
// grid values are turned into degenerate brackets.
std::vector<Bracket> scan_brackets(const Problem& p, double lambda_min, double lambda_max,
                                   int grid, const SolverOptions& opt = {});

struct SpectrumEntry {
    double lambda = 0;
    SpectralParameter s;
    double omega_prime = 0;
    double residual = 0;  // |omega(lambda)|
    Bracket bracket;
    double nearest_lattice = 0;  // in s units; meaningless when s is imaginary
    LatticeFamily family = LatticeFamily::none;
};

// An eigenvalue pair off the real axis (stored with Im > 0; the conjugate is
// implied). The reference problem has exactly one such pair; they carry
// sampling terms just like real eigenvalues.
struct ComplexPair {
    std::complex<double> mu;
    std::complex<double> omega_prime;
    double residual = 0;  // |omega(mu)|
};

struct Spectrum {
    std::vector<SpectrumEntry> entries;  // strictly increasing lambda
    std::vector<ComplexPair> pairs;
    double lambda_floor = 0;
    std::uint64_t fingerprint = 0;
};

// Brent iteration to bracket width tol_root*(1+|lambda|), at most 200
// evaluations. Requires a sign change (degenerate brackets from the scanner
// are accepted as-is). Robust against wildly unequal endpoint magnitudes,
// which every dip-split bracket has.
SpectrumEntry refine_root(const Problem& p, Bracket br, const SolverOptions& opt = {});

// Full pipeline: automatic lower floor, seeded scan with collision splitting,
// refinement, deduplication, simplicity certificates, derivative attachment
// (difference step capped by the gap to the nearest other root), and a
// bounded complex-pair hunt in the low-lambda region. Throws SolveError on a
// shortfall when lambda_max capped the search.
Spectrum compute_spectrum(const Problem& p, int n, const SolverOptions& opt = {});

// Argument-principle count of zeros of omega inside the rectangle
// [re_lo,re_hi] x [-im, im] (boundary must avoid zeros; real roots inside are
// counted too).
int count_zeros_rect(const Problem& p, double re_lo, double re_hi, double im,
                     const SolverOptions& opt = {});

std::vector<ComplexPair> find_complex_pairs(const Problem& p, double re_lo, double re_hi,
                                            double im_max, int n_real_inside,
                                            const SolverOptions& opt = {});

}  // namespace slsamp
