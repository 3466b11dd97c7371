#pragma once

// Reflection points on the unit-circle mirror: the quartic route, the
// Apollonius-circle route in the real parameter t, discriminant-based
// root-structure classification, and the resulting triangular ratio metric.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "alhazen/poly.hpp"

namespace alhazen::disk {

struct PointPair {
    Complex z1;
    Complex z2;
    Complex s() const { return z1 + z2; }
    Complex p() const { return z1 * z2; }
};

enum class RootVariant {
    FourSimpleUnimodular,
    TwoUnimodularTwoOff,
    MultipleDoublePlusTwoSimple,
    MultipleTriplePlusOpposite,
};

struct RootClassification {
    RootVariant variant;
    double discriminant_value;
};

struct PASolution {
    std::vector<Complex> reflection_points; // unit modulus, sorted by (re, im)
    poly::RootSet all_roots;
    double metric_value;
    bool blocked;
};

inline constexpr double kUnimodularTol = 1e-7;

// u^4 term conj(p), descending through -conj(s), 0, s, -p; ascending storage.
inline poly::Poly pa_quartic(const PointPair& pair) {
    const Complex s = pair.s(), p = pair.p();
    return poly::Poly{-p, s, Complex{0.0, 0.0}, -std::conj(s), std::conj(p)};
}

inline bool pa_filter(Complex u, const PointPair& pair) {
    const Complex s = pair.s(), p = pair.p();
    return (std::conj(p) * u * u - std::conj(s) * u).real() + 1.0 > 0.0;
}

inline double discriminant(const PointPair& pair) {
    if (pair.z1 == Complex{0.0, 0.0} || pair.z2 == Complex{0.0, 0.0})
        throw std::invalid_argument("discriminant: zero input point");
    const Complex s = pair.s(), p = pair.p();
    const double ns = std::norm(s), np = std::norm(p);
    const double cube = ns - 4.0 * np;
    const double im = (s * s * std::conj(p)).imag();
    return 4.0 * cube * cube * cube + 108.0 * im * im;
}

inline double e1(const PointPair& pair) { return std::abs(pair.s()) - std::abs(pair.p()); }
inline double e2(const PointPair& pair) { return std::abs(pair.s()) - 2.0 * std::abs(pair.p()); }

inline RootClassification classify_roots(const PointPair& pair, double tol_rel = 1e-9) {
    const double d = discriminant(pair);
    const double scale = std::norm(pair.s()) + std::norm(pair.p());
    const double tol = tol_rel * scale * scale * scale;
    if (d < -tol) return {RootVariant::FourSimpleUnimodular, d};
    if (d > tol) return {RootVariant::TwoUnimodularTwoOff, d};
    // multiple root: a wide cluster radius absorbs the eps^(1/3) spread a
    // triple root induces in the solver
    poly::SolveOptions opt;
    opt.cluster_eps = 5e-5;
    const poly::RootSet rs = poly::poly_roots(pa_quartic(pair), opt);
    int max_mult = 0;
    for (int m : rs.multiplicity_estimates) max_mult = std::max(max_mult, m);
    if (max_mult >= 3) return {RootVariant::MultipleTriplePlusOpposite, d};
    return {RootVariant::MultipleDoublePlusTwoSimple, d};
}

namespace detail {

inline bool segment_meets_unit_circle(Complex z1, Complex z2) {
    const Complex w = z2 - z1;
    const double a = std::norm(w);
    const double b = 2.0 * (std::conj(z1) * w).real();
    const double c = std::norm(z1) - 1.0;
    if (a == 0.0) return std::abs(c) == 0.0;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)})
        if (t >= 0.0 && t <= 1.0) return true;
    return false;
}

inline void sort_points(std::vector<Complex>& pts) {
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

inline void dedupe_points(std::vector<Complex>& pts, double eps) {
    sort_points(pts);
    std::vector<Complex> out;
    for (Complex p : pts) {
        bool dup = false;
        for (Complex q : out)
            if (std::abs(p - q) <= eps) dup = true;
        if (!dup) out.push_back(p);
    }
    pts = std::move(out);
}

inline PASolution finish_solution(const PointPair& pair, std::vector<Complex> points,
                                  poly::RootSet roots) {
    PASolution sol;
    sort_points(points);
    sol.reflection_points = std::move(points);
    sol.all_roots = std::move(roots);
    sol.blocked = segment_meets_unit_circle(pair.z1, pair.z2);
    if (sol.blocked) {
        sol.metric_value = 1.0;
        return sol;
    }
    if (sol.reflection_points.empty())
        throw std::runtime_error("no reflection points survived the filter");
    double min_sum = std::numeric_limits<double>::infinity();
    for (Complex u : sol.reflection_points)
        min_sum = std::min(min_sum, std::abs(pair.z1 - u) + std::abs(u - pair.z2));
    sol.metric_value = std::abs(pair.z1 - pair.z2) / min_sum;
    return sol;
}

// two Newton steps against the reflection quartic, then renormalize to the
// unit circle; refines candidate points produced by either route
inline Complex polish_unimodular(Complex u, const poly::Poly& quartic) {
    const poly::Poly d = poly::poly_derivative(quartic);
    for (int i = 0; i < 2; ++i) {
        const Complex dv = poly::poly_eval(d, u);
        if (std::abs(dv) < 1e-300) break;
        const Complex step = poly::poly_eval(quartic, u) / dv;
        if (std::abs(step) > 1e-2) break;
        u -= step;
    }
    const double m = std::abs(u);
    return m > 0.0 ? u / m : u;
}

} // namespace detail

inline PASolution pa_points_disk(const PointPair& pair) {
    if (pair.z1 == pair.z2) throw std::invalid_argument("coincident points");
    const poly::Poly quartic = pa_quartic(pair);

    std::vector<Complex> candidates;
    poly::RootSet rs;
    const bool z1_zero = pair.z1 == Complex{0.0, 0.0};
    const bool z2_zero = pair.z2 == Complex{0.0, 0.0};
    if (z1_zero || z2_zero) {
        // one source at the center: roots are 0 and the two antipodal points
        // on the diameter through the other source
        const Complex other = z1_zero ? pair.z2 : pair.z1;
        const Complex e = other / std::abs(other);
        rs.roots = {Complex{0.0, 0.0}, e, -e};
        detail::sort_points(rs.roots);
        for (Complex r : rs.roots) {
            rs.residuals.push_back(poly::poly_residual(quartic, r));
            rs.multiplicity_estimates.push_back(1);
        }
        candidates = {e, -e};
    } else {
        rs = poly::poly_roots(quartic);
        for (Complex r : rs.roots)
            if (std::abs(std::abs(r) - 1.0) <= kUnimodularTol) candidates.push_back(r);
    }

    std::vector<Complex> points;
    for (Complex u : candidates) {
        const Complex w = detail::polish_unimodular(u, quartic);
        if (pa_filter(w, pair)) points.push_back(w);
    }
    detail::dedupe_points(points, 1e-9);
    return detail::finish_solution(pair, std::move(points), std::move(rs));
}

// Real quartic in the Apollonius parameter t, built from |z1|^2, |z2|^2 and
// |z1-z2|^2; its roots in (0,1) locate the reflection points.
inline poly::Poly apollonius_quartic(const PointPair& pair) {
    const double cross = (std::conj(pair.z1) * pair.z2).imag();
    const double scale = std::max(1.0, std::abs(pair.z1) * std::abs(pair.z2));
    if (std::abs(cross) <= 1e-12 * scale)
        throw std::invalid_argument("degenerate: collinear with center");
    const double n1 = std::norm(pair.z1);
    const double n2 = std::norm(pair.z2);
    const double d = std::norm(pair.z1 - pair.z2);
    const double t4 = (n1 - n2) * (n1 - n2) - 4.0 * d;
    const double t3 = -4.0 * (n1 * (n1 - n2) - 2.0 * d - n1 + n2);
    const double t2 = 2.0 * n1 * (3.0 * n1 - n2) - 8.0 * n1 + 4.0 * n2 - 5.0 * d;
    const double t1 = -(n1 * (4.0 * n1 - 5.0) + n2 - d);
    const double t0 = n1 * (n1 - 1.0);
    return poly::Poly{Complex{t0, 0.0}, Complex{t1, 0.0}, Complex{t2, 0.0}, Complex{t3, 0.0},
                      Complex{t4, 0.0}};
}

inline PASolution pa_points_apollonius(const PointPair& pair) {
    const poly::Poly tq = apollonius_quartic(pair); // throws on the degenerate cases
    const poly::Poly quartic = pa_quartic(pair);

    std::vector<double> tvals;
    const poly::RootSet rs = poly::poly_roots(tq);
    for (Complex r : rs.roots)
        if (std::abs(r.imag()) <= 1e-7 * std::max(1.0, std::abs(r))) tvals.push_back(r.real());
    // equal moduli put a double root at t = 1/2 which may surface as a
    // complex pair; insert the exact value explicitly
    if (std::abs(std::abs(pair.z1) - std::abs(pair.z2)) <=
        1e-9 * std::max({1.0, std::abs(pair.z1), std::abs(pair.z2)}))
        tvals.push_back(0.5);

    std::vector<Complex> points;
    for (double t : tvals) {
        if (!(t > 1e-9 && t < 1.0 - 1e-9)) continue;
        const Complex v = t * pair.z2 + (1.0 - t) * pair.z1;
        const double mv = std::abs(v);
        if (mv < 1e-12) continue;
        for (double sign : {1.0, -1.0}) {
            Complex w = sign * v / mv;
            w = detail::polish_unimodular(w, quartic);
            if (poly::poly_residual(quartic, w) <= 1e-6 && pa_filter(w, pair)) points.push_back(w);
        }
    }
    detail::dedupe_points(points, 1e-9);
    return detail::finish_solution(pair, std::move(points), poly::RootSet{rs});
}

} // namespace alhazen::disk
