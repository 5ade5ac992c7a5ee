#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "slsamp/problem.hpp"

using namespace slsamp;

namespace {

template <class F>
std::string message_of(F&& f) {
    try {
        f();
    } catch (const ProblemError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("validation accepts the reference data and precomputes rho") {
    Problem p = testfix::p0();
    CHECK(p.a() == 0.0);
    CHECK(p.b() == 3.0);
    CHECK(p.rho() == 1.0);  // alpha1p*alpha2 - alpha1*alpha2p = 0*0 - 1*(-1)
    CHECK(p.q_is_zero());
    CHECK(p.seg_len(0) == 1.0);
    CHECK(p.seg_len(1) == 1.0);
    CHECK(p.seg_len(2) == 1.0);
}

TEST_CASE("validation names the violated constraint") {
    auto bad = [](auto mutate) {
        RawProblem r = testfix::raw_p0();
        mutate(r);
        return message_of([&] { Problem::validate(r); });
    };
    CHECK(bad([](RawProblem& r) { r.c1 = -1; }).find("a must be less than c1") !=
          std::string::npos);
    CHECK(bad([](RawProblem& r) { r.c2 = r.c1; }).find("c1 must be less than c2") !=
          std::string::npos);
    CHECK(bad([](RawProblem& r) { r.b = 1.5; }).find("c2 must be less than b") !=
          std::string::npos);
    CHECK(bad([](RawProblem& r) { r.beta1 = r.beta2 = 0; }).find("beta1 and beta2") !=
          std::string::npos);
    CHECK(bad([](RawProblem& r) { r.delta = 0; }).find("delta must be positive") !=
          std::string::npos);
    CHECK(bad([](RawProblem& r) { r.delta = -2; }).find("delta must be positive") !=
          std::string::npos);
    CHECK(bad([](RawProblem& r) { r.gamma = 0; }).find("gamma must be nonzero") !=
          std::string::npos);
    CHECK(bad([](RawProblem& r) { r.alpha2p = 1; }).find("rho must be positive") !=
          std::string::npos);
    CHECK(bad([](RawProblem& r) { r.b = std::nan(""); }).find("finite") != std::string::npos);
}

TEST_CASE("segment lookup splits half open at the interface points") {
    Problem p = testfix::p0();
    CHECK(p.segment_of(0.0) == 0);
    CHECK(p.segment_of(0.999) == 0);
    CHECK(p.segment_of(1.0) == 1);
    CHECK(p.segment_of(2.0) == 2);
    CHECK(p.segment_of(3.0) == 2);
    CHECK_THROWS_AS((void)p.q(0, 2.9), ProblemError);
    CHECK_THROWS_AS((void)p.q(3, 0.5), ProblemError);
}

TEST_CASE("polynomial potential evaluates in the global abscissa") {
    Problem p = testfix::qx();
    CHECK(p.q(0, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p.q(1, 1.75) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(p.q(2, 3.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_FALSE(p.q_is_zero());
}

TEST_CASE("per segment specs are independent") {
    RawProblem r = testfix::raw_p0();
    std::array<SegmentSpec, 3> segs = {PolySegment{{1.0}}, PolySegment{{0.0, 0.0, 1.0}},
                                       PolySegment{{-2.0}}};
    r.q = PiecewiseFn::per_segment(segs);
    Problem p = Problem::validate(r);
    CHECK(p.q(0, 0.5) == 1.0);
    CHECK(p.q(1, 1.5) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(p.q(2, 2.5) == -2.0);
}

TEST_CASE("linear table data reproduces exactly") {
    // Fritsch-Carlson slopes on linear data equal the data slope, so the
    // interpolant is the line itself
    RawProblem r = testfix::raw_p0();
    r.q = PiecewiseFn::table({0.0, 0.7, 1.4, 2.1, 3.0}, {1.0, 2.4, 3.8, 5.2, 7.0});
    Problem p = Problem::validate(r);
    for (double x : {0.05, 0.65, 1.0, 1.33, 2.0, 2.6, 3.0}) {
        int seg = p.segment_of(x);
        CHECK(p.q(seg, x) == doctest::Approx(1.0 + 2.0 * x).epsilon(1e-14));
    }
}

TEST_CASE("table coverage and monotonicity are enforced") {
    RawProblem r = testfix::raw_p0();
    r.q = PiecewiseFn::table({0.5, 1.5, 3.0}, {0.0, 1.0, 2.0});  // starts past a
    std::string m = message_of([&] { Problem::validate(r); });
    CHECK(m.find("potential") != std::string::npos);

    RawProblem r2 = testfix::raw_p0();
    r2.q = PiecewiseFn::table({0.0, 2.0, 1.0, 3.0}, {0.0, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS(Problem::validate(r2), ProblemError);
}

TEST_CASE("fingerprint separates potentials, describe is stable") {
    Problem a = testfix::p0();
    Problem b = testfix::qx();
    CHECK(a.fingerprint() != b.fingerprint());
    CHECK(a.fingerprint() == testfix::p0().fingerprint());
    CHECK(a.raw().q.describe() == testfix::p0().raw().q.describe());
}

TEST_CASE("spectral parameter keeps lambda primary") {
    auto sp = SpectralParameter::from_lambda(4.0);
    CHECK(sp.s == 2.0);
    CHECK_FALSE(sp.imaginary);
    auto sn = SpectralParameter::from_lambda(-4.0);
    CHECK(sn.s == 2.0);
    CHECK(sn.imaginary);
    auto s0 = SpectralParameter::from_lambda(0.0);
    CHECK(s0.s == 0.0);
    CHECK_FALSE(s0.imaginary);
}

TEST_CASE("fnv1a64 matches the reference vectors") {
    // published test vectors for 64 bit FNV-1a
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}
