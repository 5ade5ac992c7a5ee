#pragma once

// Baseline sampling engines used as regression oracles for the eigenvalue
// reconstruction: uniform sinc interpolation, nonuniform Lagrange
// interpolation on a perturbed grid (with the quarter-spacing deviation
// gate), and a generic kernel-gram reconstruction.

#include <cstddef>
#include <functional>
#include <vector>

#include "slsamp/problem.hpp"

namespace slsamp {

struct SignedLog {
    double log_mag = 0;
    int sign = 1;
    double value() const;
};

// sin(sigma*t - k*pi) / (sigma*t - k*pi), with the removable singularity
// evaluated by series near the node
double sinc_kernel(double sigma, double t, int k);

struct BandlimitedSamples {
    double sigma = 1.0;
    int k_lo = 0;           // index of t.front()
    std::vector<double> t;  // ascending sample points
    std::vector<double> f;  // sample values
    double deviation = 0;   // sup |t_k - k*pi/sigma|
};

BandlimitedSamples uniform_samples(double sigma, int k_lo, int k_hi,
                                   const std::function<double(double)>& f);

// rejects grids with deviation >= pi/(4*sigma); the error message carries
// both numbers
BandlimitedSamples nonuniform_samples(double sigma, int k_lo, std::vector<double> t,
                                      std::vector<double> f);

// sum of f(t_k) * sinc(sigma*t - k*pi); exact at sample points
double wks_reconstruct(const BandlimitedSamples& samples, double t);

// G(t) = (t - t_0) * prod_{k=1..K} (1 - t/t_k)(1 - t/t_{-k}) over the
// largest symmetric index window the sample set supports
SignedLog levinson_G(const BandlimitedSamples& samples, double t);

// derivative at the node with index k (in [-K, K]) by removing that factor
SignedLog levinson_Gprime(const BandlimitedSamples& samples, int k);

// sum of f(t_k) * G(t) / (G'(t_k) (t - t_k)) over the symmetric window
double levinson_reconstruct(const BandlimitedSamples& samples, double t);

// generic engine: sum of samples[k] * gram[t_index][k] / norms[k]; the
// caller supplies the kernel inner products. Empty sample set gives 0.
double kramer_reconstruct(const std::vector<std::vector<double>>& kernel_gram,
                          const std::vector<double>& norms, const std::vector<double>& samples,
                          std::size_t t_index);

}  // namespace slsamp
