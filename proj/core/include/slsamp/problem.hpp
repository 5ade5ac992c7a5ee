#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace slsamp {

// Thrown when a problem definition violates one of its constraints. The
// message names the violated inequality ("delta must be positive", ...).
struct ProblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PolySegment {
    std::vector<double> coeff;  // c0 + c1*x + c2*x^2 + ... in the global abscissa
};

struct TableSegment {
    std::vector<double> x;  // strictly increasing, must span the owning segment
    std::vector<double> y;
    std::vector<double> slope;  // monotone-cubic slopes, filled by finalize()
};

using SegmentSpec = std::variant<PolySegment, TableSegment>;

// Piecewise function over the three segments [a,c1], [c1,c2], [c2,b]. Used for
// the potential q and for transform source functions g. Polynomials evaluate
// directly; tables go through a Fritsch-Carlson monotone cubic, so linear data
// reproduces exactly and no overshoot is introduced between samples.
class PiecewiseFn {
public:
    PiecewiseFn();  // identically zero
    static PiecewiseFn polynomial(std::vector<double> coeff);  // same poly on every segment
    static PiecewiseFn per_segment(std::array<SegmentSpec, 3> segs);
    static PiecewiseFn table(std::vector<double> x, std::vector<double> y);  // one table spanning [a,b]

    // Validates tables (monotone abscissae, full segment coverage) and
    // precomputes interpolation slopes. Problem::validate calls this; `what`
    // names the function in error messages ("potential", "source g").
    void finalize(double a, double c1, double c2, double b, const std::string& what);

    // seg is 0,1,2; x must lie in the closed segment. Evaluating at a shared
    // endpoint gives that segment's one-sided limit.
    double eval(int seg, double x) const;

    bool is_zero() const;
    std::string describe() const;  // canonical text, feeds the fingerprint

private:
    std::array<SegmentSpec, 3> seg_;
};

struct RawProblem {
    double a = 0, c1 = 0, c2 = 0, b = 0;
    PiecewiseFn q;
    double beta1 = 0, beta2 = 0;
    double alpha1 = 0, alpha2 = 0, alpha1p = 0, alpha2p = 0;
    double delta = 0, gamma = 0;
};

// Immutable validated problem instance. Construction goes through validate();
// afterwards every invariant (ordering, delta > 0, gamma != 0, rho > 0,
// |beta1|+|beta2| != 0, evaluable potential) holds and rho is precomputed.
// Safe for concurrent reads.
class Problem {
public:
    static Problem validate(RawProblem raw);

    double a() const { return p_.a; }
    double c1() const { return p_.c1; }
    double c2() const { return p_.c2; }
    double b() const { return p_.b; }
    double beta1() const { return p_.beta1; }
    double beta2() const { return p_.beta2; }
    double alpha1() const { return p_.alpha1; }
    double alpha2() const { return p_.alpha2; }
    double alpha1p() const { return p_.alpha1p; }
    double alpha2p() const { return p_.alpha2p; }
    double delta() const { return p_.delta; }
    double gamma() const { return p_.gamma; }
    double rho() const { return rho_; }

    double seg_lo(int seg) const;
    double seg_hi(int seg) const;
    double seg_len(int seg) const { return seg_hi(seg) - seg_lo(seg); }
    int segment_of(double x) const;  // half-open split at c1, c2; b maps to 2

    double q(int seg, double x) const;  // range-checked one-sided evaluation
    bool q_is_zero() const { return p_.q.is_zero(); }

    const RawProblem& raw() const { return p_; }
    std::uint64_t fingerprint() const { return fp_; }

private:
    explicit Problem(RawProblem r);
    RawProblem p_;
    double rho_;
    std::uint64_t fp_;
};

// lambda with its square root; for lambda < 0 the root is imaginary and `s`
// stores the magnitude with `imaginary` set. Diagnostic only: integration is
// always done in lambda.
struct SpectralParameter {
    double lambda = 0;
    double s = 0;
    bool imaginary = false;

    static SpectralParameter from_lambda(double lambda);
};

std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64(const std::string& s);

}  // namespace slsamp
