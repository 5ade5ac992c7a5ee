#pragma once

// Forward integral transform of an L2 source against the left shooting
// solution, and its recovery from eigenvalue samples by a Lagrange-type
// interpolation series. Two weight families are supported: the shooting
// characteristic omega(lambda) evaluated fresh per probe, and the canonical
// product assembled from the computed spectrum (log-magnitude + sign form).

#include <complex>
#include <cstdint>
#include <vector>

#include "slsamp/eigensolve.hpp"
#include "slsamp/problem.hpp"
#include "slsamp/quadrature.hpp"
#include "slsamp/shooting.hpp"

namespace slsamp {

struct TransformEntry {
    double lambda = 0;
    double value = 0;        // F(lambda_n)
    double omega_prime = 0;  // omega'(lambda_n), nonzero for simple roots
};

// nonreal characteristic roots come in conjugate pairs; one representative
// with Im > 0 is stored and its mirror term is folded in as 2*Re(...)
struct TransformPairSample {
    std::complex<double> mu{0, 0};
    std::complex<double> value{0, 0};
    std::complex<double> omega_prime{0, 0};
};

struct TransformSamples {
    std::vector<TransformEntry> entries;  // ascending lambda
    std::vector<TransformPairSample> pairs;
    int n_trunc = 0;  // default truncation = number of entries
    std::uint64_t fingerprint = 0;
};

// weighted integral of g against the left solution at lambda:
//   int_1 g*u + delta^2 int_2 g*u + gamma^2 int_3 g*u
double forward_transform(const Problem& p, const SegmentGrids& grids, const PiecewiseFn& g,
                         double lambda, const ShootOptions& opt = {});
double forward_transform(const Problem& p, const PiecewiseFn& g, double lambda,
                         const ShootOptions& opt = {});
std::complex<double> forward_transform_c(const Problem& p, const SegmentGrids& grids,
                                         const PiecewiseFn& g, std::complex<double> lambda,
                                         const ShootOptions& opt = {});

// evaluates the transform at every spectrum node (and nonreal pair) and
// attaches the derivative weights
TransformSamples sample_transform(const Problem& p, const PiecewiseFn& g, const Spectrum& spec,
                                  const ShootOptions& opt = {});

// Lagrange series with omega weights. Within 1e-9*(1+|lambda_n|) of a node
// the exact node value is returned (interpolation property). n_trunc < 0
// means the sample set's own truncation count.
double reconstruct(const Problem& p, const TransformSamples& samples, double lambda,
                   int n_trunc = -1, const ShootOptions& opt = {});

// same series with the omega value supplied by the caller; exposes the
// invariance of the ratio omega(lambda)/omega'(lambda_n) under rescaling
double reconstruct_with_omega(const TransformSamples& samples, double lambda, double omega_value,
                              int n_trunc = -1);

struct SignedLogValue {
    double log_mag = 0;  // -inf encodes an exact zero
    int sign = 1;        // -1, 0, +1
    double value() const;
};

// prod (1 - lambda/lambda_n) over the first n_trunc eigenvalues, times
// |1 - lambda/mu|^2 per conjugate pair; if a zero eigenvalue is present the
// corresponding factor is lambda itself
SignedLogValue canonical_product(const Spectrum& spec, double lambda, int n_trunc = -1);

// derivative at the n-th node by removing that factor analytically
SignedLogValue canonical_product_derivative(const Spectrum& spec, int n, int n_trunc = -1);

// derivative at the j-th pair representative mu: removed-factor product times
// (-1/mu)*(1 - mu/conj(mu))
std::complex<double> canonical_product_derivative_pair(const Spectrum& spec, int j,
                                                       int n_trunc = -1);

// Lagrange series with canonical-product weights; needs no shooting. Any
// constant multiple of the product cancels inside the ratio, so this agrees
// with the omega-weighted series up to the drift of the truncated tail.
double reconstruct_normalized(const TransformSamples& samples, const Spectrum& spec,
                              double lambda, int n_trunc = -1);

struct ReconstructionReport {
    std::vector<double> probes;
    std::vector<double> direct;              // quadrature truth per probe
    std::vector<int> schedule;               // truncation counts
    std::vector<std::vector<double>> recon;  // [schedule index][probe index]
    std::vector<double> node_residual_max;   // per schedule entry
    std::vector<double> max_rel;             // per schedule entry, relative to error_scale
    std::vector<double> mean_rel;
    double error_scale = 0;  // max |direct| over the probe set
    std::uint64_t fingerprint = 0;
};

// empty probes: 25 equispaced in [lambda_0, lambda_{M/2}], M = smallest
// schedule entry; empty schedule: {25, 50, 100, 200}
ReconstructionReport truncation_report(const Problem& p, const PiecewiseFn& g,
                                       const Spectrum& spec, std::vector<double> probes,
                                       std::vector<int> schedule, const ShootOptions& opt = {});

}  // namespace slsamp
