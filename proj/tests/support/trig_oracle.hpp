#pragma once

// Self-contained reference implementation for three-segment problems with a
// constant potential on each segment. Everything here is closed form: segment
// propagation uses cos/cosh (or their small-argument series), so the only
// error is rounding. Deliberately shares no code with the library under test.

#include <complex>
#include <vector>

namespace oracle {

struct Setup {
    double a, c1, c2, b;
    double q1, q2, q3;  // constant potential per segment
    double beta1, beta2;
    double alpha1, alpha2, alpha1p, alpha2p;
    double delta, gamma;
};

// the q = 0 configuration every test freezes values for
Setup reference();

struct State {
    double u, up;
};

// closed-form solution of u'' = w u across a span of length len
State propagate(State y, double w, double len);
void propagate_c(std::complex<double>& u, std::complex<double>& up, std::complex<double> w,
                 double len);

// left shooting solution at b, jump maps applied at c1 and c2
State left_at_b(const Setup& s, double lambda);

double omega(const Setup& s, double lambda);
std::complex<double> omega_c(const Setup& s, std::complex<double> lambda);

// every real characteristic root in [lambda_lo, lambda_hi]: dense scan
// (uniform in lambda below 1, uniform in sqrt(lambda) above), recursive
// subdivision of sign-preserving dips, bisection to machine width
std::vector<double> roots(const Setup& s, double lambda_lo, double lambda_hi);

int count_in(const Setup& s, double lambda_lo, double lambda_hi);

}  // namespace oracle
