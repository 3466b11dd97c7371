#pragma once

// Triangular ratio metric s_G(z1, z2) = sup over boundary z of
// |z1-z2| / (|z1-z| + |z-z2|) on disk and conic domains, a boundary-sampled
// oracle for it, level-set extraction by ray bisection, and the residual
// measurement for the conjectured edge-point conic.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "alhazen/conic.hpp"
#include "alhazen/poly.hpp"

namespace alhazen::smetric {

enum class DomainKind { SumLess, SumGreater, DiffLess, DiffGreater };

// Region bounded by a focal conic, e.g. SumLess is {z : |z-f1|+|z-f2| < r}.
// Coincident foci with a Sum kind describe a disk (circle boundary).
struct ConicDomain {
    Complex f1;
    Complex f2;
    double r;
    DomainKind kind;
};

inline bool is_sum_kind(DomainKind k) {
    return k == DomainKind::SumLess || k == DomainKind::SumGreater;
}

inline void validate_domain(const ConicDomain& dom) {
    if (!(dom.r > 0.0)) throw std::invalid_argument("domain radius must be positive");
    const double gap = std::abs(dom.f1 - dom.f2);
    if (is_sum_kind(dom.kind)) {
        if (!(dom.r > gap)) throw std::invalid_argument("sum domain requires r > |f1-f2|");
    } else {
        if (!(dom.r < gap)) throw std::invalid_argument("difference domain requires r < |f1-f2|");
    }
}

inline double boundary_measure(const ConicDomain& dom, Complex z) {
    const double d1 = std::abs(z - dom.f1), d2 = std::abs(z - dom.f2);
    return is_sum_kind(dom.kind) ? d1 + d2 : std::abs(d1 - d2);
}

inline bool member(const ConicDomain& dom, Complex z) {
    const double m = boundary_measure(dom, z);
    switch (dom.kind) {
    case DomainKind::SumLess:
    case DomainKind::DiffLess: return m < dom.r;
    case DomainKind::SumGreater:
    case DomainKind::DiffGreater: return m > dom.r;
    }
    return false;
}

inline conic::Conic boundary_conic(const ConicDomain& dom) {
    validate_domain(dom);
    if (dom.f1 == dom.f2) {
        // circle of radius r/2 about the common focus
        const Complex m = dom.f1;
        const double radius = 0.5 * dom.r;
        return conic::Conic{Complex{0.0, 0.0}, -m, 1.0, std::norm(m) - radius * radius};
    }
    return conic::conic_from_foci(dom.f1, dom.f2, dom.r);
}

// Deterministic boundary sampling; grids nest under n -> 2n so sampled
// suprema are monotone in the refinement.
inline std::vector<Complex> boundary_samples(const ConicDomain& dom, int n) {
    validate_domain(dom);
    if (n < 1) throw std::invalid_argument("boundary_samples: n must be positive");
    std::vector<Complex> pts;
    const Complex mid = 0.5 * (dom.f1 + dom.f2);
    if (is_sum_kind(dom.kind)) {
        if (dom.f1 == dom.f2) {
            const double radius = 0.5 * dom.r;
            pts.reserve(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
                pts.push_back(mid + std::polar(radius, th));
            }
            return pts;
        }
        const double c = 0.5 * std::abs(dom.f2 - dom.f1);
        const Complex e = (dom.f2 - dom.f1) / std::abs(dom.f2 - dom.f1);
        const double semi_a = 0.5 * dom.r;
        const double semi_b = std::sqrt(semi_a * semi_a - c * c);
        pts.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
            pts.push_back(mid + e * Complex{semi_a * std::cos(th), semi_b * std::sin(th)});
        }
        return pts;
    }
    // hyperbola: both branches over a fixed parameter window reaching 10
    // transverse semi-axes out
    const double c = 0.5 * std::abs(dom.f2 - dom.f1);
    const Complex e = (dom.f2 - dom.f1) / std::abs(dom.f2 - dom.f1);
    const double semi_a = 0.5 * dom.r;
    const double semi_b = std::sqrt(c * c - semi_a * semi_a);
    const double window = std::acosh(10.0);
    pts.reserve(2 * static_cast<std::size_t>(n) + 2);
    for (int j = 0; j <= n; ++j) {
        const double mu = -window + 2.0 * window * static_cast<double>(j) / n;
        const Complex offset{semi_a * std::cosh(mu), semi_b * std::sinh(mu)};
        pts.push_back(mid + e * offset);
        pts.push_back(mid - e * offset);
    }
    return pts;
}

namespace detail {

// Smallest sum |u-1| + |u+1| over the on-curve tangency candidates of the
// canonical-frame conic. `warm` optionally carries sextic roots from a nearby
// instance and is refreshed on success.
inline double canonical_min_sum(const conic::Conic& frame_conic, std::vector<Complex>* warm) {
    const conic::SexticF4 f4 = conic::f4_coefficients(frame_conic);
    poly::Poly sextic = conic::sextic_poly(f4);
    // A frame whose boundary image is large pushes every root to magnitude ~R,
    // so the coefficients decay geometrically by R per degree and the leading
    // ones fall below the trim threshold. Solving in u = sigma*v flattens that
    // profile; the rescale is applied only when it actually balances the ends.
    double sigma = 1.0;
    const double lead = std::abs(sextic.back());
    const double tail = std::abs(sextic.front());
    if (lead > 0.0 && tail > 1e6 * lead) {
        const double cand = std::pow(tail / lead, 1.0 / 6.0);
        poly::Poly scaled(sextic.size());
        double pw = 1.0;
        double peak = 0.0;
        for (std::size_t k = 0; k < sextic.size(); ++k, pw *= cand) {
            scaled[k] = sextic[k] * pw;
            peak = std::max(peak, std::abs(scaled[k]));
        }
        if (peak <= 1e4 * tail) {
            sextic = std::move(scaled);
            sigma = cand;
        }
    }
    poly::SolveOptions opt;
    if (warm)
        for (Complex g : *warm) opt.initial_guesses.push_back(g / sigma);
    poly::RootSet rs;
    try {
        rs = poly::poly_roots(sextic, opt);
    } catch (const poly::RootSolveError&) {
        opt.initial_guesses.clear();
        rs = poly::poly_roots(sextic, opt);
    }
    // A frame whose boundary image is tiny packs every root into one blob that
    // double arithmetic cannot split: both the solver stopping tolerance and
    // the rounding of the coefficients themselves smear the roots by
    // ~(error)^(1/6) of their magnitude. Re-solving after a Taylor shift onto
    // the blob recovers the cluster structure, provided the shift runs on
    // compensated coefficients; those are built lazily since most frames never
    // enter the loop.
    std::vector<poly::detail::DDComplex> sextic_dd;
    for (int round = 0; round < 6; ++round) {
        Complex center{0.0, 0.0};
        for (Complex v : rs.roots) center += v;
        center /= static_cast<double>(rs.roots.size());
        double spread = 0.0;
        for (Complex v : rs.roots) spread = std::max(spread, std::abs(v - center));
        const double unit = 1.0 + std::abs(center);
        if (!(spread > 1e-9 * unit) || spread > 0.25 * unit) break;
        if (sextic_dd.empty()) {
            const auto w = conic::detail::w_coefficients_compensated(frame_conic);
            sextic_dd.assign(w.begin(), w.end());
            // mirror the balancing substitution; uniform scalings are skipped
            // because they do not move roots
            poly::detail::DD pw{1.0, 0.0};
            const poly::detail::DD sg{sigma, 0.0};
            for (auto& x : sextic_dd) {
                x = pw * x;
                pw = poly::detail::dd_mul(pw, sg);
            }
        }
        poly::Poly recentered = poly::poly_shift_scale(sextic_dd, center, spread);
        double top = 0.0;
        for (const Complex& x : recentered) top = std::max(top, std::abs(x));
        if (!(top > 0.0)) break;
        for (Complex& x : recentered) x /= top;
        poly::RootSet refined;
        try {
            refined = poly::poly_roots(recentered, poly::SolveOptions{});
        } catch (const poly::RootSolveError&) {
            break;
        }
        for (Complex& v : refined.roots) v = center + spread * v;
        double new_spread = 0.0;
        Complex new_center{0.0, 0.0};
        for (Complex v : refined.roots) new_center += v;
        new_center /= static_cast<double>(refined.roots.size());
        for (Complex v : refined.roots) new_spread = std::max(new_spread, std::abs(v - new_center));
        rs = std::move(refined);
        if (new_spread >= 0.9 * spread) break;
    }
    const double scale = conic::coefficient_scale(frame_conic);
    double best = std::numeric_limits<double>::infinity();
    for (Complex v : rs.roots) {
        const Complex u = sigma * v;
        const double tol = 1e-6 * scale * (1.0 + std::abs(u)) * (1.0 + std::abs(u));
        if (std::abs(conic::conic_eval(frame_conic, u)) > tol) continue;
        best = std::min(best, std::abs(u - 1.0) + std::abs(u + 1.0));
    }
    if (!std::isfinite(best)) throw std::runtime_error("no tangency found");
    if (warm) {
        warm->clear();
        for (std::size_t i = 0; i < rs.roots.size(); ++i) {
            const Complex u = sigma * rs.roots[i];
            for (int j = 0; j < rs.multiplicity_estimates[i]; ++j)
                warm->push_back(u + static_cast<double>(j) * 1e-7 * (1.0 + std::abs(u)) *
                                        std::polar(1.0, 0.7 * (1.0 + j)));
        }
    }
    return best;
}

struct SEvaluator {
    conic::Conic boundary;
    Complex z0;
    std::vector<Complex> warm;

    double operator()(Complex zeta) {
        const conic::Similarity a = conic::canonical_transform(z0, zeta);
        const conic::Conic frame = conic::transform_conic(boundary, a);
        return 2.0 / canonical_min_sum(frame, &warm);
    }
};

} // namespace detail

inline double smetric_conic(Complex z1, Complex z2, const ConicDomain& dom) {
    validate_domain(dom);
    if (z1 == z2) return 0.0; // metric limit, by convention
    if (!member(dom, z1) || !member(dom, z2))
        throw std::domain_error("source outside domain");
    const conic::Similarity a = conic::canonical_transform(z1, z2);
    const conic::Conic frame = conic::transform_conic(boundary_conic(dom), a);
    if (conic::segment_blocked(frame)) return 1.0;
    return 2.0 / detail::canonical_min_sum(frame, nullptr);
}

inline double smetric_bruteforce(Complex z1, Complex z2, const ConicDomain& dom, int n) {
    if (n < 100) throw std::invalid_argument("smetric_bruteforce: n must be at least 100");
    validate_domain(dom);
    if (z1 == z2) return 0.0;
    if (!member(dom, z1) || !member(dom, z2))
        throw std::domain_error("source outside domain");
    const double gap = std::abs(z1 - z2);
    double best = 0.0;
    for (Complex z : boundary_samples(dom, n))
        best = std::max(best, gap / (std::abs(z1 - z) + std::abs(z - z2)));
    return best;
}

struct LevelSet {
    Complex center;
    double level;
    std::vector<Complex> points;         // ordered by ray angle
    std::vector<double> unresolved_rays; // angles with no accepted crossing
};

namespace detail {

// First positive ray parameter where the boundary conic is hit; infinity if
// the ray stays inside forever.
inline double first_exit(const conic::Conic& c, Complex z0, Complex w) {
    const Complex ac = std::conj(c.a);
    const double qa = 2.0 * (ac * w * w).real() + c.p;
    const double qb = 4.0 * (ac * z0 * w).real() + 2.0 * c.p * (std::conj(z0) * w).real() +
                      2.0 * (std::conj(c.b) * w).real();
    const double qc = conic::conic_eval(c, z0);
    const double inf = std::numeric_limits<double>::infinity();
    if (std::abs(qa) < 1e-14 * (std::abs(qb) + std::abs(qc) + 1.0)) {
        if (qb == 0.0) return inf;
        const double root = -qc / qb;
        return root > 1e-12 ? root : inf;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return inf;
    const double sq = std::sqrt(disc);
    double best = inf;
    for (double root : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)})
        if (root > 1e-12) best = std::min(best, root);
    return best;
}

constexpr int kProfileSize = 64;
constexpr double kLevelCap = 1.0 - 5e-5; // levels at 1.0 are solved at this height
constexpr double kBracketTol = 1e-6;     // recorded in CLI metadata

} // namespace detail

// Shared-profile extraction of several levels at once: each ray's s-profile
// is sampled once, then every level is bracketed and refined on it by the
// Illinois variant of false position.
inline std::vector<LevelSet> levelset_family(const ConicDomain& dom, Complex z0,
                                             const std::vector<double>& levels, int nrays) {
    validate_domain(dom);
    if (nrays < 4) throw std::invalid_argument("levelset: need at least 4 rays");
    for (double t : levels)
        if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("levelset: level out of (0,1]");
    if (!member(dom, z0)) throw std::domain_error("source outside domain");

    const conic::Conic boundary = boundary_conic(dom);
    std::vector<LevelSet> out(levels.size());
    for (std::size_t li = 0; li < levels.size(); ++li)
        out[li] = LevelSet{z0, levels[li], {}, {}};

    double tmax = 0.0;
    for (double t : levels) tmax = std::max(tmax, std::min(t, detail::kLevelCap));

    const double domain_scale =
        1.0 + std::abs(z0) + std::abs(dom.f1) + std::abs(dom.f2) + dom.r;

    for (int k = 0; k < nrays; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / nrays;
        const Complex w = std::polar(1.0, angle);
        detail::SEvaluator eval{boundary, z0, {}};

        double reach = detail::first_exit(boundary, z0, w);
        bool ray_ok = true;
        if (std::isfinite(reach)) {
            reach *= 1.0 - 1e-6; // just inside; s there is already ~1
        } else {
            // unbounded ray: expand until the largest requested level is
            // passed with margin; the margin shrinks near 1 because s never
            // reaches 1 at finite radius
            const double margin = std::min(1e-4, 0.5 * (1.0 - tmax));
            reach = 10.0 * domain_scale;
            for (int grow = 0;; ++grow) {
                if (eval(z0 + reach * w) >= tmax + margin) break;
                if (grow >= 40) {
                    ray_ok = false;
                    break;
                }
                reach *= 2.0;
            }
        }
        if (!ray_ok) {
            for (auto& ls : out) ls.unresolved_rays.push_back(angle);
            continue;
        }

        std::array<double, detail::kProfileSize + 1> rho{}, prof{};
        rho[0] = 0.0;
        prof[0] = 0.0;
        for (int i = 1; i <= detail::kProfileSize; ++i) {
            rho[static_cast<std::size_t>(i)] =
                reach * static_cast<double>(i) / detail::kProfileSize;
            prof[static_cast<std::size_t>(i)] = eval(z0 + rho[static_cast<std::size_t>(i)] * w);
        }

        for (std::size_t li = 0; li < levels.size(); ++li) {
            const double teff = std::min(levels[li], detail::kLevelCap);
            int hit = -1;
            for (int i = 1; i <= detail::kProfileSize; ++i)
                if (prof[static_cast<std::size_t>(i)] >= teff) {
                    hit = i;
                    break;
                }
            if (hit < 0) {
                out[li].unresolved_rays.push_back(angle);
                continue;
            }
            double lo = rho[static_cast<std::size_t>(hit - 1)];
            double hi = rho[static_cast<std::size_t>(hit)];
            double flo = prof[static_cast<std::size_t>(hit - 1)] - teff;
            double fhi = prof[static_cast<std::size_t>(hit)] - teff;
            double best_rho = hi, best_err = std::abs(fhi);
            int last_side = 0;
            for (int iter = 0; iter < 60 && best_err > 1e-6; ++iter) {
                if (hi - lo <= detail::kBracketTol * std::max(1.0, hi)) break;
                double mid = (fhi - flo != 0.0) ? hi - fhi * (hi - lo) / (fhi - flo)
                                                : 0.5 * (lo + hi);
                const double margin = 0.01 * (hi - lo);
                mid = std::clamp(mid, lo + margin, hi - margin);
                const double fmid = eval(z0 + mid * w) - teff;
                if (std::abs(fmid) < best_err) {
                    best_err = std::abs(fmid);
                    best_rho = mid;
                }
                // Illinois weighting keeps the stale endpoint moving
                if (fmid < 0.0) {
                    lo = mid;
                    flo = fmid;
                    if (last_side < 0) fhi *= 0.5;
                    last_side = -1;
                } else {
                    hi = mid;
                    fhi = fmid;
                    if (last_side > 0) flo *= 0.5;
                    last_side = 1;
                }
            }
            if (best_err <= 5e-5)
                out[li].points.push_back(z0 + best_rho * w);
            else
                out[li].unresolved_rays.push_back(angle);
        }
    }
    return out;
}

inline LevelSet levelset(const ConicDomain& dom, Complex z0, double t, int nrays) {
    return levelset_family(dom, z0, std::vector<double>{t}, nrays)[0];
}

// Max deviation, over detected contour corners, from the conjectured conic
// through those corners (sum or difference form matching the domain kind).
inline double conjecture_edge_residual(const ConicDomain& dom, Complex z0, const LevelSet& ls) {
    if (ls.points.size() < 3) throw std::invalid_argument("insufficient samples");
    const double k_const = is_sum_kind(dom.kind)
                               ? std::abs(dom.f1 - z0) + std::abs(dom.f2 - z0)
                               : std::abs(std::abs(dom.f1 - z0) - std::abs(dom.f2 - z0));
    const std::size_t n = ls.points.size();
    const double threshold = 30.0 * std::numbers::pi / 180.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex prev = ls.points[(i + n - 1) % n];
        const Complex cur = ls.points[i];
        const Complex next = ls.points[(i + 1) % n];
        const Complex d1 = cur - prev, d2 = next - cur;
        if (std::abs(d1) < 1e-15 || std::abs(d2) < 1e-15) continue;
        if (std::abs(std::arg(d2 / d1)) <= threshold) continue;
        const double measured = is_sum_kind(dom.kind)
                                    ? std::abs(cur - dom.f1) + std::abs(cur - dom.f2)
                                    : std::abs(std::abs(cur - dom.f1) - std::abs(cur - dom.f2));
        worst = std::max(worst, std::abs(measured - k_const));
    }
    return worst;
}

} // namespace alhazen::smetric
