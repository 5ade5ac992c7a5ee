#include "slsamp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace slsamp {

namespace {

void fill_pchip_slopes(TableSegment& t) {
    const std::size_t n = t.x.size();
    t.slope.assign(n, 0.0);
    if (n == 1) return;
    std::vector<double> h(n - 1), d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = t.x[i + 1] - t.x[i];
        d[i] = (t.y[i + 1] - t.y[i]) / h[i];
    }
    if (n == 2) {
        t.slope[0] = t.slope[1] = d[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            t.slope[i] = 0.0;
        } else {
            double w1 = 2.0 * h[i] + h[i - 1];
            double w2 = h[i] + 2.0 * h[i - 1];
            t.slope[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if (d0 * d1 <= 0.0 && std::fabs(m) > 3.0 * std::fabs(d0)) return 3.0 * d0;
        return m;
    };
    t.slope[0] = end_slope(h[0], h[1], d[0], d[1]);
    t.slope[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

double eval_table(const TableSegment& t, double x) {
    const auto& xs = t.x;
    if (xs.size() == 1) return t.y[0];
    // clamp to table range; finalize() guarantees coverage up to rounding
    if (x <= xs.front()) x = xs.front();
    if (x >= xs.back()) x = xs.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = (it == xs.begin()) ? 0 : std::size_t(it - xs.begin()) - 1;
    if (i + 1 >= xs.size()) i = xs.size() - 2;
    double h = xs[i + 1] - xs[i];
    double u = (x - xs[i]) / h;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    double h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u);
    double h11 = u * u * (u - 1);
    return h00 * t.y[i] + h10 * h * t.slope[i] + h01 * t.y[i + 1] + h11 * h * t.slope[i + 1];
}

double eval_poly(const PolySegment& p, double x) {
    double v = 0.0;
    for (std::size_t i = p.coeff.size(); i-- > 0;) v = v * x + p.coeff[i];
    return v;
}

}  // namespace

PiecewiseFn::PiecewiseFn() {
    for (auto& s : seg_) s = PolySegment{{0.0}};
}

PiecewiseFn PiecewiseFn::polynomial(std::vector<double> coeff) {
    PiecewiseFn f;
    if (coeff.empty()) coeff.push_back(0.0);
    for (auto& s : f.seg_) s = PolySegment{coeff};
    return f;
}

PiecewiseFn PiecewiseFn::per_segment(std::array<SegmentSpec, 3> segs) {
    PiecewiseFn f;
    f.seg_ = std::move(segs);
    return f;
}

PiecewiseFn PiecewiseFn::table(std::vector<double> x, std::vector<double> y) {
    PiecewiseFn f;
    TableSegment t{std::move(x), std::move(y), {}};
    for (auto& s : f.seg_) s = t;
    return f;
}

void PiecewiseFn::finalize(double a, double c1, double c2, double b, const std::string& what) {
    const double lo[3] = {a, c1, c2};
    const double hi[3] = {c1, c2, b};
    for (int seg = 0; seg < 3; ++seg) {
        if (auto* t = std::get_if<TableSegment>(&seg_[seg])) {
            if (t->x.size() != t->y.size() || t->x.size() < 2)
                throw ProblemError(what + " table for segment " + std::to_string(seg + 1) +
                                   " needs at least two (x,y) rows");
            for (std::size_t i = 0; i + 1 < t->x.size(); ++i)
                if (!(t->x[i] < t->x[i + 1]))
                    throw ProblemError(what + " table for segment " + std::to_string(seg + 1) +
                                       " must have strictly increasing abscissae");
            const double tol = 1e-12 * (1.0 + std::fabs(hi[seg]) + std::fabs(lo[seg]));
            if (t->x.front() > lo[seg] + tol || t->x.back() < hi[seg] - tol)
                throw ProblemError(what + " table for segment " + std::to_string(seg + 1) +
                                   " must span the whole segment");
            fill_pchip_slopes(*t);
        }
    }
}

double PiecewiseFn::eval(int seg, double x) const {
    const auto& s = seg_[seg];
    if (const auto* p = std::get_if<PolySegment>(&s)) return eval_poly(*p, x);
    return eval_table(std::get<TableSegment>(s), x);
}

bool PiecewiseFn::is_zero() const {
    for (const auto& s : seg_) {
        const auto* p = std::get_if<PolySegment>(&s);
        if (!p) return false;
        for (double c : p->coeff)
            if (c != 0.0) return false;
    }
    return true;
}

std::string PiecewiseFn::describe() const {
    std::ostringstream os;
    for (const auto& s : seg_) {
        if (const auto* p = std::get_if<PolySegment>(&s)) {
            os << "poly:";
            for (double c : p->coeff) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g,", c);
                os << buf;
            }
        } else {
            const auto& t = std::get<TableSegment>(s);
            os << "table:" << t.x.size() << ":";
            for (std::size_t i = 0; i < t.x.size(); ++i) {
                char buf[72];
                std::snprintf(buf, sizeof buf, "%.17g:%.17g,", t.x[i], t.y[i]);
                os << buf;
            }
        }
        os << ";";
    }
    return os.str();
}

Problem Problem::validate(RawProblem raw) {
    auto finite = [](double v) { return std::isfinite(v); };
    for (double v : {raw.a, raw.c1, raw.c2, raw.b, raw.beta1, raw.beta2, raw.alpha1, raw.alpha2,
                     raw.alpha1p, raw.alpha2p, raw.delta, raw.gamma})
        if (!finite(v)) throw ProblemError("problem parameters must be finite");
    if (!(raw.a < raw.c1)) throw ProblemError("a must be less than c1");
    if (!(raw.c1 < raw.c2)) throw ProblemError("c1 must be less than c2");
    if (!(raw.c2 < raw.b)) throw ProblemError("c2 must be less than b");
    if (std::fabs(raw.beta1) + std::fabs(raw.beta2) == 0.0)
        throw ProblemError("beta1 and beta2 must not both be zero");
    if (!(raw.delta > 0.0)) throw ProblemError("delta must be positive");
    if (raw.gamma == 0.0) throw ProblemError("gamma must be nonzero");
    const double rho = raw.alpha1p * raw.alpha2 - raw.alpha1 * raw.alpha2p;
    if (!(rho > 0.0)) throw ProblemError("rho must be positive");
    raw.q.finalize(raw.a, raw.c1, raw.c2, raw.b, "potential");
    return Problem(std::move(raw));
}

Problem::Problem(RawProblem r) : p_(std::move(r)) {
    rho_ = p_.alpha1p * p_.alpha2 - p_.alpha1 * p_.alpha2p;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|",
                  p_.a, p_.c1, p_.c2, p_.b, p_.beta1, p_.beta2, p_.alpha1, p_.alpha2, p_.alpha1p,
                  p_.alpha2p, p_.delta, p_.gamma);
    fp_ = fnv1a64(std::string(buf) + p_.q.describe());
}

double Problem::seg_lo(int seg) const {
    switch (seg) {
        case 0: return p_.a;
        case 1: return p_.c1;
        default: return p_.c2;
    }
}

double Problem::seg_hi(int seg) const {
    switch (seg) {
        case 0: return p_.c1;
        case 1: return p_.c2;
        default: return p_.b;
    }
}

int Problem::segment_of(double x) const {
    if (x < p_.c1) return 0;
    if (x < p_.c2) return 1;
    return 2;
}

double Problem::q(int seg, double x) const {
    if (seg < 0 || seg > 2) throw ProblemError("segment index must be 0, 1 or 2");
    const double tol = 1e-12 * (1.0 + std::fabs(x));
    if (x < seg_lo(seg) - tol || x > seg_hi(seg) + tol)
        throw ProblemError("x outside segment " + std::to_string(seg + 1));
    return p_.q.eval(seg, x);
}

SpectralParameter SpectralParameter::from_lambda(double lambda) {
    SpectralParameter sp;
    sp.lambda = lambda;
    sp.imaginary = lambda < 0.0;
    sp.s = std::sqrt(std::fabs(lambda));
    return sp;
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace slsamp
