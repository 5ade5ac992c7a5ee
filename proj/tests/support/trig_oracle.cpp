#include "trig_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

Setup reference() {
    Setup s{};
    s.a = 0;
    s.c1 = 1;
    s.c2 = 2;
    s.b = 3;
    s.q1 = s.q2 = s.q3 = 0;
    s.beta1 = 0;
    s.beta2 = 1;
    s.alpha1 = 1;
    s.alpha2 = 0;
    s.alpha1p = 0;
    s.alpha2p = -1;
    s.delta = 1;
    s.gamma = 1;
    return s;
}

namespace {

// C(len) = cosh-type and S(len) = sinh-type fundamental pair for u'' = w u:
//   C = sum w^m len^(2m) / (2m)!,  S = sum w^m len^(2m+1) / (2m+1)!
// so u(len) = u0 C + u0' S and u'(len) = u0 w S + u0' C for either sign of w.
// The series branch keeps the w -> 0 limit smooth.
void fundamental(double w, double len, double& C, double& S) {
    const double z = w * len * len;
    if (std::fabs(z) < 1e-4) {
        // |next term| / |sum| < 1e-20/9! at this threshold
        double zc = 1.0, cs = 0.0, ss = 0.0;
        for (int m = 0; m < 6; ++m) {
            static const double f2m[6] = {1.0, 2.0, 24.0, 720.0, 40320.0, 3628800.0};
            static const double f2m1[6] = {1.0, 6.0, 120.0, 5040.0, 362880.0, 39916800.0};
            cs += zc / f2m[m];
            ss += zc / f2m1[m];
            zc *= z;
        }
        C = cs;
        S = len * ss;
    } else if (w > 0.0) {
        const double k = std::sqrt(w);
        C = std::cosh(k * len);
        S = std::sinh(k * len) / k;
    } else {
        const double k = std::sqrt(-w);
        C = std::cos(k * len);
        S = std::sin(k * len) / k;
    }
}

void fundamental_c(std::complex<double> w, double len, std::complex<double>& C,
                   std::complex<double>& S) {
    const std::complex<double> z = w * (len * len);
    if (std::abs(z) < 1e-4) {
        std::complex<double> zc = 1.0, cs = 0.0, ss = 0.0;
        for (int m = 0; m < 6; ++m) {
            static const double f2m[6] = {1.0, 2.0, 24.0, 720.0, 40320.0, 3628800.0};
            static const double f2m1[6] = {1.0, 6.0, 120.0, 5040.0, 362880.0, 39916800.0};
            cs += zc / f2m[m];
            ss += zc / f2m1[m];
            zc *= z;
        }
        C = cs;
        S = len * ss;
    } else {
        // cosh(sqrt(w) len) and sinh(sqrt(w) len)/sqrt(w) are single valued in
        // w, so the principal branch is safe
        const std::complex<double> k = std::sqrt(w);
        C = std::cosh(k * len);
        S = std::sinh(k * len) / k;
    }
}

}  // namespace

State propagate(State y, double w, double len) {
    double C, S;
    fundamental(w, len, C, S);
    return {y.u * C + y.up * S, y.u * w * S + y.up * C};
}

void propagate_c(std::complex<double>& u, std::complex<double>& up, std::complex<double> w,
                 double len) {
    std::complex<double> C, S;
    fundamental_c(w, len, C, S);
    const std::complex<double> nu = u * C + up * S;
    const std::complex<double> nup = u * w * S + up * C;
    u = nu;
    up = nup;
}

State left_at_b(const Setup& s, double lambda) {
    State y{s.beta2, -s.beta1};
    y = propagate(y, s.q1 - lambda, s.c1 - s.a);
    // jump at c1: u+ = u-/delta, u+' = (u-' + lambda u-)/delta
    y = {y.u / s.delta, (y.up + lambda * y.u) / s.delta};
    y = propagate(y, s.q2 - lambda, s.c2 - s.c1);
    // jump at c2: u+ = (delta/gamma) u-, u+' = (delta u-' + lambda u-)/gamma
    y = {(s.delta / s.gamma) * y.u, (s.delta * y.up + lambda * y.u) / s.gamma};
    return propagate(y, s.q3 - lambda, s.b - s.c2);
}

double omega(const Setup& s, double lambda) {
    State y = left_at_b(s, lambda);
    const double g2 = s.gamma * s.gamma;
    return g2 * ((lambda * s.alpha1p - s.alpha1) * y.u - (lambda * s.alpha2p - s.alpha2) * y.up);
}

std::complex<double> omega_c(const Setup& s, std::complex<double> lambda) {
    std::complex<double> u = s.beta2, up = -s.beta1;
    propagate_c(u, up, s.q1 - lambda, s.c1 - s.a);
    std::complex<double> nu = u / s.delta, nup = (up + lambda * u) / s.delta;
    u = nu;
    up = nup;
    propagate_c(u, up, s.q2 - lambda, s.c2 - s.c1);
    nu = (s.delta / s.gamma) * u;
    nup = (s.delta * up + lambda * u) / s.gamma;
    u = nu;
    up = nup;
    propagate_c(u, up, s.q3 - lambda, s.b - s.c2);
    const double g2 = s.gamma * s.gamma;
    return g2 * ((lambda * s.alpha1p - s.alpha1) * u - (lambda * s.alpha2p - s.alpha2) * up);
}

namespace {

double bisect(const Setup& s, double lo, double hi, double flo) {
    for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(lo)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = omega(s, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// sign changes on the grid become brackets; a grid point whose |value| is a
// local minimum without a sign change gets subdivided, twice if needed, to
// catch root pairs hiding inside one cell
void scan(const Setup& s, const std::vector<double>& xs, std::vector<double>& out, int depth) {
    std::vector<double> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = omega(s, xs[i]);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        if (v[i] == 0.0) {
            out.push_back(xs[i]);
        } else if (v[i] * v[i + 1] < 0.0) {
            out.push_back(bisect(s, xs[i], xs[i + 1], v[i]));
        } else if (depth > 0 && i > 0 && std::fabs(v[i]) < std::fabs(v[i - 1]) &&
                   std::fabs(v[i]) < std::fabs(v[i + 1]) && v[i - 1] * v[i + 1] > 0.0) {
            std::vector<double> sub(401);
            for (int j = 0; j <= 400; ++j)
                sub[std::size_t(j)] = xs[i - 1] + (xs[i + 1] - xs[i - 1]) * j / 400.0;
            scan(s, sub, out, depth - 1);
        }
    }
    if (!v.empty() && v.back() == 0.0) out.push_back(xs.back());
}

}  // namespace

std::vector<double> roots(const Setup& s, double lambda_lo, double lambda_hi) {
    if (!(lambda_lo < lambda_hi)) throw std::invalid_argument("roots: empty window");
    std::vector<double> xs;
    const double low_hi = std::min(1.0, lambda_hi);
    if (lambda_lo < low_hi) {
        const int n = std::max(200, int((low_hi - lambda_lo) / 0.01));
        for (int i = 0; i <= n; ++i) xs.push_back(lambda_lo + (low_hi - lambda_lo) * i / n);
    }
    if (lambda_hi > 1.0) {
        const double s_lo = std::sqrt(std::max(lambda_lo, 1.0)), s_hi = std::sqrt(lambda_hi);
        const int n = std::max(64, int((s_hi - s_lo) / 5e-4));
        for (int i = 1; i <= n; ++i) {
            const double si = s_lo + (s_hi - s_lo) * i / n;
            xs.push_back(si * si);
        }
    }
    std::vector<double> out;
    scan(s, xs, out, 2);
    std::sort(out.begin(), out.end());
    std::vector<double> dedup;
    for (double r : out) {
        if (dedup.empty() || r - dedup.back() > 1e-9 * (1.0 + std::fabs(r))) dedup.push_back(r);
    }
    return dedup;
}

int count_in(const Setup& s, double lambda_lo, double lambda_hi) {
    return int(roots(s, lambda_lo, lambda_hi).size());
}

}  // namespace oracle
