#include "slsamp/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slsamp/quadrature.hpp"

namespace slsamp {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool node_hit(double t, double tk) { return std::fabs(t - tk) <= 1e-12 * (1.0 + std::fabs(tk)); }

// symmetric index window [-K, K] covered by the sample set
int symmetric_window(const BandlimitedSamples& s) {
    int k_hi = s.k_lo + int(s.t.size()) - 1;
    if (s.k_lo > 0 || k_hi < 0)
        throw ProblemError("interpolation grid must contain the index-0 sample");
    return std::min(-s.k_lo, k_hi);
}

double node(const BandlimitedSamples& s, int k) { return s.t[std::size_t(k - s.k_lo)]; }
double sample(const BandlimitedSamples& s, int k) { return s.f[std::size_t(k - s.k_lo)]; }

// log-magnitude/sign product of the grid factors, optionally skipping the
// factor belonging to index `skip` (INT_MIN = keep all)
SignedLog g_parts(const BandlimitedSamples& s, double t, int skip) {
    const int K = symmetric_window(s);
    SignedLog out{0.0, 1};
    auto mul = [&out](double factor) {
        if (factor == 0.0) {
            out.sign = 0;
            out.log_mag = -std::numeric_limits<double>::infinity();
            return false;
        }
        if (factor < 0.0) {
            out.sign = -out.sign;
            factor = -factor;
        }
        out.log_mag += std::log(factor);
        return true;
    };
    if (skip != 0) {
        if (!mul(t - node(s, 0))) return out;
    }
    for (int k = 1; k <= K; ++k) {
        if (k != skip && !mul(1.0 - t / node(s, k))) return out;
        if (-k != skip && !mul(1.0 - t / node(s, -k))) return out;
    }
    return out;
}

}  // namespace

double SignedLog::value() const {
    if (sign == 0) return 0.0;
    return double(sign) * std::exp(log_mag);
}

double sinc_kernel(double sigma, double t, int k) {
    double x = sigma * t - double(k) * kPi;
    if (std::fabs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

BandlimitedSamples uniform_samples(double sigma, int k_lo, int k_hi,
                                   const std::function<double(double)>& f) {
    if (!(sigma > 0.0)) throw ProblemError("sigma must be positive");
    if (k_hi < k_lo) throw ProblemError("empty sample index range");
    BandlimitedSamples s;
    s.sigma = sigma;
    s.k_lo = k_lo;
    for (int k = k_lo; k <= k_hi; ++k) {
        double tk = double(k) * kPi / sigma;
        s.t.push_back(tk);
        s.f.push_back(f(tk));
    }
    s.deviation = 0.0;
    return s;
}

BandlimitedSamples nonuniform_samples(double sigma, int k_lo, std::vector<double> t,
                                      std::vector<double> f) {
    if (!(sigma > 0.0)) throw ProblemError("sigma must be positive");
    if (t.empty() || t.size() != f.size())
        throw ProblemError("sample points and values must be nonempty and equal-length");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw ProblemError("sample points must be strictly increasing");
    BandlimitedSamples s;
    s.sigma = sigma;
    s.k_lo = k_lo;
    s.t = std::move(t);
    s.f = std::move(f);
    double dev = 0.0;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
        int k = k_lo + int(i);
        dev = std::max(dev, std::fabs(s.t[i] - double(k) * kPi / sigma));
    }
    s.deviation = dev;
    const double bound = kPi / (4.0 * sigma);
    if (dev >= bound) {
        std::ostringstream msg;
        msg << "sample grid deviation " << dev << " is not below the admissible bound " << bound;
        throw ProblemError(msg.str());
    }
    return s;
}

double wks_reconstruct(const BandlimitedSamples& samples, double t) {
    if (samples.t.empty()) return 0.0;
    if (samples.deviation > 1e-14)
        throw ProblemError("wks_reconstruct: sample grid is not uniform");
    for (std::size_t i = 0; i < samples.t.size(); ++i)
        if (node_hit(t, samples.t[i])) return samples.f[i];
    std::vector<double> terms(samples.t.size());
    for (std::size_t i = 0; i < samples.t.size(); ++i)
        terms[i] = samples.f[i] * sinc_kernel(samples.sigma, t, samples.k_lo + int(i));
    return pairwise_sum(terms);
}

SignedLog levinson_G(const BandlimitedSamples& samples, double t) {
    return g_parts(samples, t, std::numeric_limits<int>::min());
}

SignedLog levinson_Gprime(const BandlimitedSamples& samples, int k) {
    const int K = symmetric_window(samples);
    if (k < -K || k > K)
        throw ProblemError("levinson_Gprime: node index outside the symmetric window");
    SignedLog rest = g_parts(samples, node(samples, k), k);
    if (rest.sign == 0)
        throw ProblemError("levinson_Gprime: repeated sample point");
    if (k == 0) return rest;  // removed factor (t - t_0) has unit derivative
    double tk = node(samples, k);
    SignedLog out = rest;
    out.log_mag -= std::log(std::fabs(tk));
    if (tk > 0.0) out.sign = -out.sign;  // d/dt (1 - t/t_k) = -1/t_k
    return out;
}

double levinson_reconstruct(const BandlimitedSamples& samples, double t) {
    const int K = symmetric_window(samples);
    for (int k = -K; k <= K; ++k)
        if (node_hit(t, node(samples, k))) return sample(samples, k);
    SignedLog G = levinson_G(samples, t);
    if (G.sign == 0) return 0.0;
    std::vector<double> terms;
    terms.reserve(std::size_t(2 * K + 1));
    for (int k = -K; k <= K; ++k) {
        SignedLog dk = levinson_Gprime(samples, k);
        double mag = std::exp(G.log_mag - dk.log_mag);
        terms.push_back(sample(samples, k) * double(G.sign * dk.sign) * mag /
                        (t - node(samples, k)));
    }
    return pairwise_sum(terms);
}

double kramer_reconstruct(const std::vector<std::vector<double>>& kernel_gram,
                          const std::vector<double>& norms, const std::vector<double>& samples,
                          std::size_t t_index) {
    if (samples.empty()) return 0.0;
    if (norms.size() != samples.size())
        throw ProblemError("kramer_reconstruct: norms and samples must be equal-length");
    if (t_index >= kernel_gram.size())
        throw ProblemError("kramer_reconstruct: probe index out of range");
    if (kernel_gram[t_index].size() < samples.size())
        throw ProblemError("kramer_reconstruct: gram row shorter than the sample set");
    std::vector<double> terms(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (norms[k] == 0.0) throw ProblemError("kramer_reconstruct: zero norm entry");
        terms[k] = samples[k] * kernel_gram[t_index][k] / norms[k];
    }
    return pairwise_sum(terms);
}

}  // namespace slsamp
