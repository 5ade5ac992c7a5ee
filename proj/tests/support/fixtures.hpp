#pragma once

// shared problem fixtures for the test binaries; values mirror tests/data/*.ini

#include <slsamp/problem.hpp>

namespace testfix {

inline slsamp::RawProblem raw_p0() {
    slsamp::RawProblem r;
    r.a = 0;
    r.c1 = 1;
    r.c2 = 2;
    r.b = 3;
    r.beta1 = 0;
    r.beta2 = 1;
    r.alpha1 = 1;
    r.alpha2 = 0;
    r.alpha1p = 0;
    r.alpha2p = -1;
    r.delta = 1;
    r.gamma = 1;
    return r;
}

inline slsamp::Problem p0() { return slsamp::Problem::validate(raw_p0()); }

inline slsamp::Problem qx() {
    slsamp::RawProblem r = raw_p0();
    r.q = slsamp::PiecewiseFn::polynomial({0.0, 1.0});
    return slsamp::Problem::validate(r);
}

// the transform source used across the sampling tests: g(x) = x (3 - x)
inline slsamp::PiecewiseFn g_parabola() {
    return slsamp::PiecewiseFn::polynomial({0.0, 3.0, -1.0});
}

}  // namespace testfix
