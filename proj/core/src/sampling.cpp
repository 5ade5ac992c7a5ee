#include "slsamp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slsamp/parallel.hpp"

namespace slsamp {

namespace {

constexpr double kZeroEig = 1e-12;  // |lambda_n| below this is the zero eigenvalue

double seg_weight(const Problem& p, int s) {
    if (s == 0) return 1.0;
    if (s == 1) return p.delta() * p.delta();
    return p.gamma() * p.gamma();
}

int resolve_trunc(int n_trunc, int fallback, int limit) {
    int n = n_trunc < 0 ? fallback : n_trunc;
    if (n < 1) n = 1;
    if (n > limit) n = limit;
    return n;
}

bool at_node(double lambda, double node) {
    return std::fabs(lambda - node) <= 1e-9 * (1.0 + std::fabs(node));
}

int zero_eig_index(const Spectrum& sp, int n) {
    for (int i = 0; i < n; ++i)
        if (std::fabs(sp.entries[i].lambda) <= kZeroEig) return i;
    return -1;
}

// signed-log product over the first n real factors (skip one index) and all
// pair factors (skip one index); pair factors are strictly positive for real
// lambda so they never touch the sign
SignedLogValue product_parts(const Spectrum& sp, double lambda, int n, int skip_real,
                             int skip_pair) {
    const int zi = zero_eig_index(sp, n);
    SignedLogValue out{0.0, 1};
    for (int i = 0; i < n; ++i) {
        if (i == skip_real) continue;
        double factor;
        if (i == zi) {
            factor = lambda;
        } else {
            double ln = sp.entries[i].lambda;
            if (std::fabs(ln) <= kZeroEig)
                throw SolveError("canonical_product: zero eigenvalue outside the prefactor branch");
            factor = 1.0 - lambda / ln;
        }
        if (factor == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
        if (factor < 0.0) {
            out.sign = -out.sign;
            factor = -factor;
        }
        out.log_mag += std::log(factor);
    }
    for (int j = 0; j < int(sp.pairs.size()); ++j) {
        if (j == skip_pair) continue;
        double f = std::norm(1.0 - lambda / sp.pairs[j].mu);
        if (f == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
        out.log_mag += std::log(f);
    }
    return out;
}

std::complex<double> product_parts_c(const Spectrum& sp, std::complex<double> lambda, int n,
                                     int skip_pair) {
    const int zi = zero_eig_index(sp, n);
    std::complex<double> out = 1.0;
    for (int i = 0; i < n; ++i) {
        if (i == zi)
            out *= lambda;
        else
            out *= 1.0 - lambda / sp.entries[i].lambda;
    }
    for (int j = 0; j < int(sp.pairs.size()); ++j) {
        if (j == skip_pair) continue;
        std::complex<double> mu = sp.pairs[j].mu;
        out *= (1.0 - lambda / mu) * (1.0 - lambda / std::conj(mu));
    }
    return out;
}

}  // namespace

double SignedLogValue::value() const {
    if (sign == 0) return 0.0;
    return double(sign) * std::exp(log_mag);
}

double forward_transform(const Problem& p, const SegmentGrids& grids, const PiecewiseFn& g,
                         double lambda, const ShootOptions& opt) {
    PiecewiseSolution sol = shoot_left(p, lambda, opt, &grids);
    double total = 0.0;
    for (int s = 0; s < 3; ++s) {
        const auto& xs = grids.seg[s].x;
        const auto& ws = grids.seg[s].w;
        std::vector<double> prod(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            prod[i] = ws[i] * g.eval(s, xs[i]) * sol.u[s][i];
        total += seg_weight(p, s) * pairwise_sum(prod);
    }
    return total;
}

double forward_transform(const Problem& p, const PiecewiseFn& g, double lambda,
                         const ShootOptions& opt) {
    return forward_transform(p, make_segment_grids(p), g, lambda, opt);
}

std::complex<double> forward_transform_c(const Problem& p, const SegmentGrids& grids,
                                         const PiecewiseFn& g, std::complex<double> lambda,
                                         const ShootOptions& opt) {
    PiecewiseSolutionC sol = shoot_left_c(p, lambda, opt, &grids);
    std::complex<double> total = 0.0;
    for (int s = 0; s < 3; ++s) {
        const auto& xs = grids.seg[s].x;
        const auto& ws = grids.seg[s].w;
        std::vector<double> re(xs.size()), im(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::complex<double> t = ws[i] * g.eval(s, xs[i]) * sol.u[s][i];
            re[i] = t.real();
            im[i] = t.imag();
        }
        total += seg_weight(p, s) * std::complex<double>(pairwise_sum(re), pairwise_sum(im));
    }
    return total;
}

TransformSamples sample_transform(const Problem& p, const PiecewiseFn& g, const Spectrum& spec,
                                  const ShootOptions& opt) {
    if (spec.entries.empty()) throw ProblemError("sample_transform: empty spectrum");
    SegmentGrids grids = make_segment_grids(p);
    TransformSamples out;
    out.fingerprint = spec.fingerprint;
    out.entries.resize(spec.entries.size());
    parallel_for(spec.entries.size(), [&](std::size_t i) {
        const auto& e = spec.entries[i];
        if (e.omega_prime == 0.0)
            throw SolveError("sample_transform: vanishing derivative weight at a node");
        out.entries[i] = {e.lambda, forward_transform(p, grids, g, e.lambda, opt), e.omega_prime};
    });
    out.pairs.resize(spec.pairs.size());
    for (std::size_t j = 0; j < spec.pairs.size(); ++j) {
        const auto& q = spec.pairs[j];
        if (std::abs(q.omega_prime) == 0.0)
            throw SolveError("sample_transform: vanishing derivative weight at a pair");
        out.pairs[j] = {q.mu, forward_transform_c(p, grids, g, q.mu, opt), q.omega_prime};
    }
    out.n_trunc = int(out.entries.size());
    return out;
}

double reconstruct_with_omega(const TransformSamples& s, double lambda, double omega_value,
                              int n_trunc) {
    if (s.entries.empty()) throw ProblemError("reconstruct: empty sample set");
    const int n = resolve_trunc(n_trunc, s.n_trunc, int(s.entries.size()));
    for (int i = 0; i < n; ++i)
        if (at_node(lambda, s.entries[i].lambda)) return s.entries[i].value;
    std::vector<double> terms;
    terms.reserve(n + s.pairs.size());
    for (int i = 0; i < n; ++i) {
        const auto& e = s.entries[i];
        terms.push_back(e.value * omega_value / ((lambda - e.lambda) * e.omega_prime));
    }
    for (const auto& q : s.pairs) {
        std::complex<double> t = q.value * omega_value / ((lambda - q.mu) * q.omega_prime);
        terms.push_back(2.0 * t.real());
    }
    return pairwise_sum(terms);
}

double reconstruct(const Problem& p, const TransformSamples& samples, double lambda, int n_trunc,
                   const ShootOptions& opt) {
    if (samples.entries.empty()) throw ProblemError("reconstruct: empty sample set");
    const int n = resolve_trunc(n_trunc, samples.n_trunc, int(samples.entries.size()));
    for (int i = 0; i < n; ++i)
        if (at_node(lambda, samples.entries[i].lambda)) return samples.entries[i].value;
    return reconstruct_with_omega(samples, lambda, omega(p, lambda, opt), n);
}

SignedLogValue canonical_product(const Spectrum& spec, double lambda, int n_trunc) {
    if (spec.entries.empty()) throw ProblemError("canonical_product: empty spectrum");
    const int n = resolve_trunc(n_trunc, int(spec.entries.size()), int(spec.entries.size()));
    return product_parts(spec, lambda, n, -1, -1);
}

SignedLogValue canonical_product_derivative(const Spectrum& spec, int n, int n_trunc) {
    const int nn = resolve_trunc(n_trunc, int(spec.entries.size()), int(spec.entries.size()));
    if (n < 0 || n >= nn)
        throw ProblemError("canonical_product_derivative: node index outside the truncated set");
    const double ln = spec.entries[n].lambda;
    SignedLogValue rest = product_parts(spec, ln, nn, n, -1);
    if (rest.sign == 0)
        throw SolveError("canonical_product_derivative: repeated eigenvalue in the spectrum");
    if (std::fabs(ln) <= kZeroEig) return rest;  // d/dlambda of the bare prefactor is 1
    // remaining derivative factor: d/dlambda (1 - lambda/lambda_n) = -1/lambda_n
    SignedLogValue out = rest;
    out.log_mag -= std::log(std::fabs(ln));
    if (ln > 0.0) out.sign = -out.sign;
    return out;
}

std::complex<double> canonical_product_derivative_pair(const Spectrum& spec, int j, int n_trunc) {
    if (j < 0 || j >= int(spec.pairs.size()))
        throw ProblemError("canonical_product_derivative_pair: pair index out of range");
    const int n = resolve_trunc(n_trunc, int(spec.entries.size()), int(spec.entries.size()));
    const std::complex<double> mu = spec.pairs[j].mu;
    std::complex<double> rest = product_parts_c(spec, mu, n, j);
    std::complex<double> dfac = (-1.0 / mu) * (1.0 - mu / std::conj(mu));
    return rest * dfac;
}

double reconstruct_normalized(const TransformSamples& samples, const Spectrum& spec,
                              double lambda, int n_trunc) {
    if (samples.entries.empty()) throw ProblemError("reconstruct: empty sample set");
    if (samples.fingerprint != spec.fingerprint)
        throw ProblemError("reconstruct_normalized: samples were built from a different spectrum");
    const int limit = int(std::min(samples.entries.size(), spec.entries.size()));
    const int n = resolve_trunc(n_trunc, samples.n_trunc, limit);
    for (int i = 0; i < n; ++i)
        if (at_node(lambda, samples.entries[i].lambda)) return samples.entries[i].value;
    SignedLogValue P = canonical_product(spec, lambda, n);
    if (P.sign == 0) return 0.0;  // lambda sits exactly on an excluded zero factor
    std::vector<double> terms;
    terms.reserve(n + samples.pairs.size());
    // ratio assembled in log space: node derivative magnitudes overflow a
    // plain double well before n reaches a few hundred
    for (int i = 0; i < n; ++i) {
        SignedLogValue d = canonical_product_derivative(spec, i, n);
        double mag = std::exp(P.log_mag - d.log_mag);
        double sgn = double(P.sign * d.sign);
        terms.push_back(samples.entries[i].value * sgn * mag /
                        (lambda - samples.entries[i].lambda));
    }
    for (std::size_t j = 0; j < samples.pairs.size(); ++j) {
        std::complex<double> dp = canonical_product_derivative_pair(spec, int(j), n);
        std::complex<double> ln_ratio =
            std::complex<double>(P.log_mag, P.sign < 0 ? 3.14159265358979323846 : 0.0) -
            std::log(dp);
        std::complex<double> t =
            samples.pairs[j].value * std::exp(ln_ratio) / (lambda - samples.pairs[j].mu);
        terms.push_back(2.0 * t.real());
    }
    return pairwise_sum(terms);
}

ReconstructionReport truncation_report(const Problem& p, const PiecewiseFn& g,
                                       const Spectrum& spec, std::vector<double> probes,
                                       std::vector<int> schedule, const ShootOptions& opt) {
    if (spec.entries.empty()) throw ProblemError("truncation_report: empty spectrum");
    if (schedule.empty()) schedule = {25, 50, 100, 200};
    for (int nk : schedule) {
        if (nk < 1 || nk > int(spec.entries.size()))
            throw ProblemError("truncation_report: schedule entry exceeds available eigenvalues");
    }
    if (probes.empty()) {
        int m = *std::min_element(schedule.begin(), schedule.end());
        std::size_t hi = std::min<std::size_t>(std::size_t(m) / 2, spec.entries.size() - 1);
        double lo = spec.entries.front().lambda, up = spec.entries[hi].lambda;
        for (int i = 0; i < 25; ++i) probes.push_back(lo + (up - lo) * i / 24.0);
    }

    TransformSamples samples = sample_transform(p, g, spec, opt);
    SegmentGrids grids = make_segment_grids(p);

    ReconstructionReport rep;
    rep.probes = probes;
    rep.schedule = schedule;
    rep.fingerprint = spec.fingerprint;
    rep.direct.resize(probes.size());
    std::vector<double> omega_at(probes.size());
    parallel_for(probes.size(), [&](std::size_t i) {
        rep.direct[i] = forward_transform(p, grids, g, probes[i], opt);
        omega_at[i] = omega(p, probes[i], opt);
    });

    rep.recon.assign(schedule.size(), std::vector<double>(probes.size(), 0.0));
    for (std::size_t k = 0; k < schedule.size(); ++k)
        for (std::size_t i = 0; i < probes.size(); ++i)
            rep.recon[k][i] = reconstruct_with_omega(samples, probes[i], omega_at[i], schedule[k]);

    rep.node_residual_max.assign(schedule.size(), 0.0);
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        for (int j = 0; j < schedule[k]; ++j) {
            const auto& e = samples.entries[j];
            double r = std::fabs(reconstruct_with_omega(samples, e.lambda, 0.0, schedule[k]) -
                                 e.value) /
                       (1.0 + std::fabs(e.value));
            rep.node_residual_max[k] = std::max(rep.node_residual_max[k], r);
        }
    }

    rep.error_scale = 0.0;
    for (double d : rep.direct) rep.error_scale = std::max(rep.error_scale, std::fabs(d));
    const double denom = rep.error_scale > 0.0 ? rep.error_scale : 1.0;
    rep.max_rel.assign(schedule.size(), 0.0);
    rep.mean_rel.assign(schedule.size(), 0.0);
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            double r = std::fabs(rep.recon[k][i] - rep.direct[i]) / denom;
            rep.max_rel[k] = std::max(rep.max_rel[k], r);
            acc += r;
        }
        rep.mean_rel[k] = acc / double(probes.size());
    }
    return rep;
}

}  // namespace slsamp
