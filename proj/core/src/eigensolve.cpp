#include "slsamp/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slsamp/parallel.hpp"

namespace slsamp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double scan_value(const Problem& p, double lambda, const SolverOptions& opt) {
    return omega_rescaled(p, lambda, opt.shoot()).scan_value;
}

// golden-section minimization, unimodal assumption is fine for the short
// windows this is used on
template <class F>
double golden_min(F&& f, double lo, double hi, double xatol) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xatol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

struct Dip {
    double s_center = 0;  // collided seed
    double s_min = 0;     // minimizer of the edge-signed scan value
    double value = 0;     // signed minimum; > 0 means the dip never crossed
};

struct ScanResult {
    std::vector<Bracket> brackets;
    std::vector<Dip> dips;
};

ScanResult scan_impl(const Problem& p, double lambda_min, double lambda_max, int grid,
                     const SolverOptions& opt) {
    if (!(lambda_min < lambda_max))
        throw SolveError("scan_brackets: lambda_min must be below lambda_max");
    if (grid < 0) grid = 0;

    const double s_hi = lambda_max > 1.0 ? std::sqrt(lambda_max) : 0.0;
    std::vector<Seed> seeds;
    if (s_hi > 0.0) {
        int n_max = int(s_hi * (p.b() - p.a()) / kPi) + 4;
        seeds = asymptotic_seeds(p, n_max);
    }

    // evaluation grid: uniform in lambda below 1, uniform-in-s above with
    // refinement around collided seeds
    std::vector<double> xs;
    const double low_hi = std::min(1.0, lambda_max);
    if (lambda_min < low_hi) {
        int n = std::max(64, int((low_hi - lambda_min) / 0.05) + 2);
        for (int i = 0; i <= n; ++i) xs.push_back(lambda_min + (low_hi - lambda_min) * i / n);
    }
    if (s_hi > 0.0) {
        const double s_lo = std::sqrt(std::max(lambda_min, 1.0));
        const double base = 1.0 / std::max(10, opt.grid_per_unit_s);
        double s = s_lo;
        while (s < s_hi) {
            double step = base;
            // quarter of the local seed gap, converted from lambda to s,
            // is never the binding constraint for the default density; the
            // collided-seed refinement is
            for (const auto& sd : seeds) {
                if (sd.collided && std::fabs(s - sd.s) < 0.3) {
                    step = base / 8.0;
                    break;
                }
            }
            s += step;
            xs.push_back(std::min(s, s_hi) * std::min(s, s_hi));
        }
    }
    if (int(xs.size()) < grid) {
        for (int i = 0; i < grid; ++i)
            xs.push_back(lambda_min + (lambda_max - lambda_min) * (i + 0.5) / grid);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> vals(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { vals[i] = scan_value(p, xs[i], opt); });

    ScanResult out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::fabs(vals[i]) < 1e-13) {
            out.brackets.push_back({xs[i], xs[i]});
        } else if (i + 1 < xs.size() && vals[i] * vals[i + 1] < 0.0) {
            out.brackets.push_back({xs[i], xs[i + 1]});
        }
    }

    // collided seeds whose two roots hide inside one grid cell: the scan sees
    // no sign change there because the characteristic function only dips
    // across zero. Minimize the edge-signed value; a negative minimum splits
    // the dip into two brackets, a positive one is a pair candidate for the
    // complex hunt.
    for (const auto& sd : seeds) {
        if (!sd.collided) continue;
        double s_lo_w = sd.s - 0.45, s_hi_w = sd.s + 0.2;
        if (s_lo_w * s_lo_w < lambda_min || s_hi_w * s_hi_w > lambda_max) continue;
        double llo = s_lo_w * s_lo_w, lhi = s_hi_w * s_hi_w;
        int found = 0;
        for (const auto& br : out.brackets)
            if (br.lo >= llo && br.hi <= lhi) ++found;
        if (found >= 2) continue;
        double flo = scan_value(p, llo, opt), fhi = scan_value(p, lhi, opt);
        if (flo * fhi < 0.0) continue;  // single crossing, the scan has it
        double sgn = flo >= 0.0 ? 1.0 : -1.0;
        auto fs = [&](double s) { return sgn * scan_value(p, s * s, opt); };
        double smin = golden_min(fs, s_lo_w, s_hi_w, 1e-10);
        double fmin = fs(smin);
        if (fmin < 0.0 && found == 0) {
            out.brackets.push_back({llo, smin * smin});
            out.brackets.push_back({smin * smin, lhi});
        } else if (fmin >= 0.0) {
            out.dips.push_back({sd.s, smin, sgn * fmin});
        }
    }

    std::sort(out.brackets.begin(), out.brackets.end(),
              [](const Bracket& a, const Bracket& b) { return a.lo < b.lo; });
    return out;
}

}  // namespace

const char* lattice_family_name(LatticeFamily f) {
    switch (f) {
        case LatticeFamily::A: return "A";
        case LatticeFamily::B: return "B";
        case LatticeFamily::C: return "C";
        case LatticeFamily::AB: return "AB";
        case LatticeFamily::AC: return "AC";
        case LatticeFamily::BC: return "BC";
        case LatticeFamily::ABC: return "ABC";
        default: return "-";
    }
}

std::vector<Seed> asymptotic_seeds(const Problem& p, int n_max) {
    if (n_max < 1) throw SolveError("asymptotic_seeds: n_max must be at least 1");
    const double l1 = p.c1() - p.a(), l2 = p.c2() - p.c1(), l3 = p.b() - p.c2();
    struct Raw {
        double s;
        int fam;  // bit 0 = A, 1 = B, 2 = C
    };
    std::vector<Raw> raw;
    for (int nn = 0; nn <= n_max; ++nn) {
        raw.push_back({(nn + 0.5) * kPi / l1, 1});
        if (nn >= 1) raw.push_back({nn * kPi / l2, 2});
        raw.push_back({(nn + 0.5) * kPi / l3, 4});
    }
    std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.s < b.s; });
    const double min_spacing = kPi / std::max({l1, l2, l3});
    const double tol = 0.05 * min_spacing;
    std::vector<Seed> seeds;
    for (const auto& r : raw) {
        if (!seeds.empty() && r.s - seeds.back().s < tol) {
            // merge into the previous seed
            int prev = seeds.back().family == LatticeFamily::A   ? 1
                       : seeds.back().family == LatticeFamily::B ? 2
                       : seeds.back().family == LatticeFamily::C ? 4
                       : seeds.back().family == LatticeFamily::AB  ? 3
                       : seeds.back().family == LatticeFamily::AC  ? 5
                       : seeds.back().family == LatticeFamily::BC  ? 6
                                                                   : 7;
            int merged = prev | r.fam;
            static const LatticeFamily by_bits[8] = {
                LatticeFamily::none, LatticeFamily::A,  LatticeFamily::B, LatticeFamily::AB,
                LatticeFamily::C,    LatticeFamily::AC, LatticeFamily::BC, LatticeFamily::ABC};
            seeds.back().family = by_bits[merged];
            seeds.back().collided = true;
        } else {
            Seed s;
            s.s = r.s;
            s.family = r.fam == 1 ? LatticeFamily::A : r.fam == 2 ? LatticeFamily::B
                                                                  : LatticeFamily::C;
            seeds.push_back(s);
        }
    }
    return seeds;
}

std::vector<Bracket> scan_brackets(const Problem& p, double lambda_min, double lambda_max,
                                   int grid, const SolverOptions& opt) {
    return scan_impl(p, lambda_min, lambda_max, grid, opt).brackets;
}

SpectrumEntry refine_root(const Problem& p, Bracket br, const SolverOptions& opt) {
    auto f = [&](double l) { return omega(p, l, opt.shoot()); };
    SpectrumEntry e;
    e.bracket = br;
    double lo = br.lo, hi = br.hi;
    double lambda;
    if (lo == hi) {
        lambda = lo;
    } else {
        double flo = f(lo), fhi = f(hi);
        if (flo == 0.0) {
            lambda = lo;
        } else if (fhi == 0.0) {
            lambda = hi;
        } else {
            if (flo * fhi > 0.0)
                throw SolveError("refine_root: bracket does not straddle a sign change");
            // Brent. A plain secant stalls here when one endpoint value dwarfs
            // the other, which happens for every bracket produced by the dip
            // splitter: its far end sits where the characteristic function is
            // astronomically larger than near the root.
            double aa = lo, bb = hi, cc = hi;
            double fa = flo, fb = fhi, fc = fhi;
            double d = bb - aa, e_len = d;
            const double mach = std::numeric_limits<double>::epsilon();
            int iters = 0;
            for (;;) {
                if (++iters > 200)
                    throw SolveError("refine_root: no convergence in bracket [" +
                                     std::to_string(br.lo) + ", " + std::to_string(br.hi) + "]");
                if ((fb > 0.0) == (fc > 0.0)) {
                    cc = aa;
                    fc = fa;
                    e_len = d = bb - aa;
                }
                if (std::fabs(fc) < std::fabs(fb)) {
                    aa = bb;
                    bb = cc;
                    cc = aa;
                    fa = fb;
                    fb = fc;
                    fc = fa;
                }
                const double toler =
                    2.0 * mach * std::fabs(bb) + 0.5 * opt.tol_root * (1.0 + std::fabs(bb));
                const double xm = 0.5 * (cc - bb);
                if (std::fabs(xm) <= toler || fb == 0.0) break;
                if (std::fabs(e_len) >= toler && std::fabs(fa) > std::fabs(fb)) {
                    double s = fb / fa, pp, qq;
                    if (aa == cc) {
                        pp = 2.0 * xm * s;
                        qq = 1.0 - s;
                    } else {
                        double q = fa / fc, r = fb / fc;
                        pp = s * (2.0 * xm * q * (q - r) - (bb - aa) * (r - 1.0));
                        qq = (q - 1.0) * (r - 1.0) * (s - 1.0);
                    }
                    if (pp > 0.0) qq = -qq;
                    pp = std::fabs(pp);
                    if (2.0 * pp < std::min(3.0 * xm * qq - std::fabs(toler * qq),
                                            std::fabs(e_len * qq))) {
                        e_len = d;
                        d = pp / qq;
                    } else {
                        d = xm;
                        e_len = d;
                    }
                } else {
                    d = xm;
                    e_len = d;
                }
                aa = bb;
                fa = fb;
                bb += std::fabs(d) > toler ? d : (xm > 0.0 ? toler : -toler);
                fb = f(bb);
            }
            lambda = bb;
        }
    }
    e.lambda = lambda;
    e.s = SpectralParameter::from_lambda(lambda);
    e.residual = std::fabs(f(lambda));
    e.omega_prime = omega_derivative(p, lambda, 0.0, opt.shoot());
    return e;
}

namespace {

double auto_lambda_floor(const Problem& p, const SolverOptions& opt) {
    const double win = 5.0;
    double top = 1.0;
    double lowest = std::numeric_limits<double>::quiet_NaN();
    int quiet = 0;
    for (int w = 0; w < 60 && quiet < 3; ++w) {
        double lo = top - win;
        int n = 24;
        double prev = scan_value(p, lo, opt);
        bool crossed = false;
        double cross_at = 0;
        for (int i = 1; i <= n; ++i) {
            double x = lo + win * i / n;
            double v = scan_value(p, x, opt);
            if (prev * v < 0.0) {
                crossed = true;
                cross_at = lo + win * (i - 0.5) / n;
            }
            prev = v;
        }
        if (crossed) {
            lowest = std::isnan(lowest) ? cross_at : std::min(lowest, cross_at);
            quiet = 0;
        } else {
            ++quiet;
        }
        top = lo;
    }
    if (std::isnan(lowest)) return 1.0 - 4.0 * win;
    return lowest - win;
}

}  // namespace

int count_zeros_rect(const Problem& p, double re_lo, double re_hi, double im,
                     const SolverOptions& opt) {
    using C = std::complex<double>;
    auto f = [&](C z) { return omega_c(p, z, opt.shoot()); };
    C corners[5] = {C(re_lo, -im), C(re_hi, -im), C(re_hi, im), C(re_lo, im), C(re_lo, -im)};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        C z0 = corners[e], z1 = corners[e + 1];
        double t = 0.0, dt = 1.0 / 64.0;
        C prev = f(z0);
        if (std::abs(prev) == 0.0) throw SolveError("count_zeros_rect: zero on the contour");
        while (t < 1.0) {
            double tn = std::min(1.0, t + dt);
            C cur = f(z0 + (z1 - z0) * tn);
            double dphi = std::arg(cur / prev);
            if (std::fabs(dphi) > 1.5707963267948966) {
                dt *= 0.5;
                if (dt < 1e-7)
                    throw SolveError("count_zeros_rect: phase tracking failed (zero near contour?)");
                continue;
            }
            total += dphi;
            prev = cur;
            t = tn;
            dt = std::min(dt * 1.3, 1.0 / 32.0);
        }
    }
    double turns = total / (2.0 * kPi);
    double r = std::round(turns);
    if (std::fabs(turns - r) > 0.2) throw SolveError("count_zeros_rect: non-integer winding");
    return int(r);
}

std::vector<ComplexPair> find_complex_pairs(const Problem& p, double re_lo, double re_hi,
                                            double im_max, int n_real_inside,
                                            const SolverOptions& opt) {
    using C = std::complex<double>;
    std::vector<ComplexPair> pairs;
    int total = count_zeros_rect(p, re_lo, re_hi, im_max, opt);
    int defect = total - n_real_inside;
    if (defect <= 0) return pairs;
    if (defect % 2 != 0)
        throw SolveError("find_complex_pairs: odd zero-count defect, real roots missing?");
    int want = defect / 2;

    // box bisection in the upper half plane
    struct Box {
        double x0, x1, y0, y1;
    };
    auto count_box = [&](const Box& b) {
        auto f = [&](C z) { return omega_c(p, z, opt.shoot()); };
        C corners[5] = {C(b.x0, b.y0), C(b.x1, b.y0), C(b.x1, b.y1), C(b.x0, b.y1),
                        C(b.x0, b.y0)};
        double tot = 0.0;
        for (int e = 0; e < 4; ++e) {
            C z0 = corners[e], z1 = corners[e + 1];
            double t = 0.0, dt = 1.0 / 32.0;
            C prev = f(z0);
            while (t < 1.0) {
                double tn = std::min(1.0, t + dt);
                C cur = f(z0 + (z1 - z0) * tn);
                double dphi = std::arg(cur / prev);
                if (std::fabs(dphi) > 1.5707963267948966) {
                    dt *= 0.5;
                    if (dt < 1e-7) throw SolveError("find_complex_pairs: phase tracking failed");
                    continue;
                }
                tot += dphi;
                prev = cur;
                t = tn;
                dt = std::min(dt * 1.3, 1.0 / 16.0);
            }
        }
        return int(std::round(tot / (2.0 * kPi)));
    };

    std::vector<Box> work{{re_lo, re_hi, 1e-3, im_max}};
    std::vector<C> centers;
    while (!work.empty() && int(centers.size()) < want) {
        Box b = work.back();
        work.pop_back();
        int c;
        try {
            c = count_box(b);
        } catch (const SolveError&) {
            // a zero sits near this box edge; nudge the box slightly
            double dx = 0.017 * (b.x1 - b.x0), dy = 0.013 * (b.y1 - b.y0);
            b = {b.x0 - dx, b.x1 + dx, std::max(1e-4, b.y0 - dy), b.y1 + dy};
            c = count_box(b);
        }
        if (c == 0) continue;
        if ((b.x1 - b.x0) < 0.5 && (b.y1 - b.y0) < 0.5) {
            for (int k = 0; k < c; ++k)
                centers.push_back(C(0.5 * (b.x0 + b.x1), 0.5 * (b.y0 + b.y1)));
            continue;
        }
        if (b.x1 - b.x0 >= b.y1 - b.y0) {
            double xm = 0.5 * (b.x0 + b.x1);
            work.push_back({b.x0, xm, b.y0, b.y1});
            work.push_back({xm, b.x1, b.y0, b.y1});
        } else {
            double ym = 0.5 * (b.y0 + b.y1);
            work.push_back({b.x0, b.x1, b.y0, ym});
            work.push_back({b.x0, b.x1, ym, b.y1});
        }
    }

    for (C z : centers) {
        // Newton polish
        bool ok = false;
        for (int it = 0; it < 80; ++it) {
            C fv = omega_c(p, z, opt.shoot());
            C dv = omega_derivative_c(p, z, 1e-7 * (1.0 + std::abs(z)), opt.shoot());
            if (std::abs(dv) == 0.0) break;
            C step = fv / dv;
            z -= step;
            if (std::abs(step) <= 1e-11 * (1.0 + std::abs(z))) {
                ok = true;
                break;
            }
        }
        if (!ok) continue;
        if (z.imag() < 0) z = std::conj(z);
        if (z.imag() < 1e-6) continue;  // converged onto the real axis
        double res = std::abs(omega_c(p, z, opt.shoot()));
        C dv = omega_derivative_c(p, z, 1e-7 * (1.0 + std::abs(z)), opt.shoot());
        if (res > 1e-6 * (1.0 + std::abs(dv)) * (1.0 + std::abs(z))) continue;
        bool dup = false;
        for (const auto& q : pairs)
            if (std::abs(q.mu - z) < 1e-6 * (1.0 + std::abs(z))) dup = true;
        if (dup) continue;
        pairs.push_back({z, dv, res});
    }
    if (int(pairs.size()) != want)
        throw SolveError("find_complex_pairs: expected " + std::to_string(want) +
                         " pair(s), certified " + std::to_string(pairs.size()));
    std::sort(pairs.begin(), pairs.end(),
              [](const ComplexPair& a, const ComplexPair& b) { return a.mu.real() < b.mu.real(); });
    return pairs;
}

Spectrum compute_spectrum(const Problem& p, int n, const SolverOptions& opt) {
    if (n < 1) throw SolveError("compute_spectrum: n must be at least 1");
    const double floor =
        std::isnan(opt.lambda_min) ? auto_lambda_floor(p, opt) : opt.lambda_min;
    const bool capped = !std::isnan(opt.lambda_max);
    const double density = (p.b() - p.a()) / kPi;  // roots per unit s, asymptotically
    double lambda_max = capped ? opt.lambda_max
                               : std::pow((n + 4) / density + 2.0, 2.0);

    std::vector<SpectrumEntry> entries;
    std::vector<Dip> dips;
    for (int attempt = 0;; ++attempt) {
        ScanResult sc = scan_impl(p, floor, lambda_max, 0, opt);
        entries.assign(sc.brackets.size(), {});
        parallel_for(sc.brackets.size(),
                     [&](std::size_t i) { entries[i] = refine_root(p, sc.brackets[i], opt); });
        std::sort(entries.begin(), entries.end(),
                  [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.lambda < b.lambda; });
        // deduplicate
        std::vector<SpectrumEntry> uniq;
        for (const auto& e : entries) {
            if (!uniq.empty() &&
                e.lambda - uniq.back().lambda < 1e-7 * (1.0 + std::fabs(e.lambda))) {
                if (e.residual < uniq.back().residual) uniq.back() = e;
            } else {
                uniq.push_back(e);
            }
        }
        entries = std::move(uniq);
        dips = std::move(sc.dips);
        if (int(entries.size()) >= n) break;
        if (capped)
            throw SolveError("compute_spectrum: found " + std::to_string(entries.size()) +
                             " of " + std::to_string(n) +
                             " requested eigenvalues below the lambda_max cap");
        if (attempt >= 6)
            throw SolveError("compute_spectrum: search window kept growing without finding " +
                             std::to_string(n) + " eigenvalues");
        lambda_max *= 1.8;
    }

    // derivative step capped by the gap to the nearest other root; near-
    // degenerate pairs would otherwise straddle both roots and the difference
    // would be garbage
    for (std::size_t i = 0; i < entries.size(); ++i) {
        double gap = std::numeric_limits<double>::infinity();
        if (i > 0) gap = std::min(gap, entries[i].lambda - entries[i - 1].lambda);
        if (i + 1 < entries.size()) gap = std::min(gap, entries[i + 1].lambda - entries[i].lambda);
        double h = 1e-6 * (1.0 + std::fabs(entries[i].lambda));
        if (std::isfinite(gap)) h = std::min(h, 0.25 * gap);
        entries[i].omega_prime = omega_derivative(p, entries[i].lambda, h, opt.shoot());
        // simplicity certificate
        double width = entries[i].bracket.hi - entries[i].bracket.lo;
        if (width > 0.0) {
            double scale = std::max(std::fabs(omega(p, entries[i].bracket.lo, opt.shoot())),
                                    std::fabs(omega(p, entries[i].bracket.hi, opt.shoot()))) /
                           width;
            if (std::fabs(entries[i].omega_prime) < 1e-6 * scale)
                throw SolveError("compute_spectrum: multiple root suspected near lambda=" +
                                 std::to_string(entries[i].lambda));
        }
        if (entries[i].omega_prime == 0.0)
            throw SolveError("compute_spectrum: vanishing derivative at a certified root");
    }

    // nearest lattice attribution
    {
        double s_top = entries.back().s.s + 2.0;
        int n_max = int(s_top * (p.b() - p.a()) / kPi) + 4;
        auto seeds = asymptotic_seeds(p, std::max(1, n_max));
        for (auto& e : entries) {
            if (e.s.imaginary) {
                e.family = LatticeFamily::none;
                e.nearest_lattice = 0.0;
                continue;
            }
            double best = std::numeric_limits<double>::infinity();
            for (const auto& sd : seeds) {
                if (std::fabs(sd.s - e.s.s) < best) {
                    best = std::fabs(sd.s - e.s.s);
                    e.nearest_lattice = sd.s;
                    e.family = sd.family;
                }
            }
        }
    }

    Spectrum spec;
    spec.lambda_floor = floor;
    spec.fingerprint = p.fingerprint();
    spec.entries.assign(entries.begin(), entries.begin() + n);

    if (opt.pair_search) {
        // the finitely many nonreal zeros live low in the spectrum; hunt in a
        // window that covers the first few cells and stop at a safe edge
        // midway between two real roots
        std::size_t k = std::min<std::size_t>(8, entries.size() - 1);
        double cap = (k + 1 < entries.size())
                         ? 0.5 * (entries[k].lambda + entries[k + 1].lambda)
                         : entries[k].lambda + 5.0;
        int inside = 0;
        for (const auto& e : entries)
            if (e.lambda > floor && e.lambda < cap) ++inside;
        double im = std::max(5.0, 0.05 * (cap - floor));
        try {
            spec.pairs = find_complex_pairs(p, floor, cap, im, inside, opt);
        } catch (const SolveError&) {
            // widen once before giving up; a pair straddling the cap breaks
            // the count
            std::size_t k2 = std::min<std::size_t>(14, entries.size() - 1);
            double cap2 = (k2 + 1 < entries.size())
                              ? 0.5 * (entries[k2].lambda + entries[k2 + 1].lambda)
                              : entries[k2].lambda + 5.0;
            int inside2 = 0;
            for (const auto& e : entries)
                if (e.lambda > floor && e.lambda < cap2) ++inside2;
            spec.pairs = find_complex_pairs(p, floor, cap2, std::max(im, 8.0), inside2, opt);
        }
    }
    (void)dips;  // dip minima that never cross are implied by the count defect
    return spec;
}

}  // namespace slsamp
