#pragma once

// Conic mirrors: the sextic whose roots are the points where a confocal
// ellipse or hyperbola with foci +-1 touches the conic, plus the frame
// reduction that brings an arbitrary point pair to those foci.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alhazen/poly.hpp"

namespace alhazen::conic {

// c(z) = conj(a) z^2 + p z conj(z) + a conj(z)^2 + conj(b) z + b conj(z) + q,
// a real-valued Hermitian form; a multiplies conj(z)^2.
struct Conic {
    Complex a;
    Complex b;
    double p;
    double q;
};

enum class ConicClass { Ellipse, Hyperbola, Parabola, Circle, DegenerateOrLine };

inline double conic_eval(const Conic& c, Complex z) {
    return 2.0 * (std::conj(c.a) * z * z).real() + c.p * std::norm(z) +
           2.0 * (std::conj(c.b) * z).real() + c.q;
}

inline double coefficient_scale(const Conic& c) {
    return std::max({std::abs(c.a), std::abs(c.b), std::abs(c.p), std::abs(c.q)});
}

inline ConicClass classify_conic(const Conic& c) {
    const double na = std::abs(c.a), np = std::abs(c.p);
    const double base = std::max(na, np);
    if (base == 0.0) return ConicClass::DegenerateOrLine;
    if (na <= 1e-10 * base) return ConicClass::Circle;
    const double disc = c.p * c.p - 4.0 * std::norm(c.a);
    const double tol = 1e-10 * (c.p * c.p + 4.0 * std::norm(c.a));
    if (std::abs(disc) <= tol) return ConicClass::Parabola;
    return disc > 0.0 ? ConicClass::Ellipse : ConicClass::Hyperbola;
}

struct Similarity {
    Complex alpha; // nonzero
    Complex beta;
    Complex apply(Complex z) const { return alpha * z + beta; }
    Similarity inverse() const { return Similarity{1.0 / alpha, -beta / alpha}; }
};

// A(z1) = 1, A(z2) = -1.
inline Similarity canonical_transform(Complex z1, Complex z2) {
    if (z1 == z2) throw std::invalid_argument("canonical transform requires distinct points");
    const Complex d = z1 - z2;
    return Similarity{2.0 / d, -(z1 + z2) / d};
}

// Coefficients of c(A^(-1)(w)) back in the standard form.
inline Conic transform_conic(const Conic& c, const Similarity& A) {
    const Similarity inv = A.inverse();
    const Complex g = inv.alpha, d = inv.beta;
    const Complex gc = std::conj(g);
    Conic out;
    out.a = c.a * gc * gc;
    out.p = c.p * std::norm(g);
    out.b = gc * (2.0 * c.a * std::conj(d) + c.p * d + c.b);
    out.q = conic_eval(c, d);
    return out;
}

// One quadratic vanishing on both loci |z-f1| +- |z-f2| = r (exactly one of
// the two is nonempty for r != |f1-f2|), obtained by squaring twice.
inline Conic conic_from_foci(Complex f1, Complex f2, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("conic_from_foci: r must be positive");
    if (f1 == f2) throw std::invalid_argument("conic_from_foci: coincident foci");
    const Complex g = f2 - f1;
    if (std::abs(r - std::abs(g)) <= 1e-12 * (r + std::abs(g)))
        throw std::domain_error("degenerate: segment/rays");
    const double h = std::norm(f1) - std::norm(f2);
    const double r2 = r * r;
    Conic c;
    c.a = g * g;
    c.p = 2.0 * std::norm(g) - 4.0 * r2;
    c.b = 2.0 * g * h + 2.0 * r2 * (f1 + f2);
    c.q = r2 * r2 + h * h - 2.0 * r2 * (std::norm(f1) + std::norm(f2));
    return c;
}

struct SexticF4 {
    std::array<Complex, 7> w; // w[k] multiplies z^k
    Conic source_conic;
};

inline poly::Poly sextic_poly(const SexticF4& f4) {
    return poly::Poly(f4.w.begin(), f4.w.end());
}

namespace detail {

// Magnitude arithmetic: every operation adds or multiplies absolute values,
// so evaluating a polynomial formula in it yields the cancellation-free term
// scale of that formula.
struct Mag {
    double v;
};
inline Mag operator+(Mag x, Mag y) { return {x.v + y.v}; }
inline Mag operator-(Mag x, Mag y) { return {x.v + y.v}; }
inline Mag operator-(Mag x) { return x; }
inline Mag operator*(Mag x, Mag y) { return {x.v * y.v}; }
inline Mag operator*(double s, Mag x) { return {std::abs(s) * x.v}; }
inline Mag conj(Mag x) { return x; }

template <typename T>
inline std::array<T, 7> w_formulas(T a, T b, T p, T q) {
    using std::conj;
    const T A = conj(a), B = conj(b);
    const T a2 = a * a, a3 = a2 * a, a4 = a3 * a;
    const T A2 = A * A, A3 = A2 * A, A4 = A3 * A;
    const T b2 = b * b, b3 = b2 * b, b4 = b2 * b2;
    const T B2 = B * B, B4 = B2 * B2;
    const T p2 = p * p, p3 = p2 * p, p4 = p3 * p, p5 = p4 * p, p6 = p5 * p;
    const T q2 = q * q, q3 = q2 * q, q4 = q3 * q;

    const T W6 = 4.0 * A * (B * b * p - B2 * a - A * b2) * (p2 - 4.0 * A * a);

    const T W5 =
        -2.0 * (b * p5 - B * (a + A) * p4 - b * (4.0 * A * q + 8.0 * A * a + B2) * p3 +
                B * (8.0 * A * a * q + 8.0 * A * a2 + (8.0 * A2 + B2) * a - 3.0 * A * b2) * p2 +
                4.0 * A * b * (4.0 * A * a * q + 4.0 * A * a2 + 4.0 * B2 * a + A * b2) * p -
                4.0 * a * A * B *
                    (8.0 * A * a * q + 4.0 * A * a2 + (4.0 * A2 + 3.0 * B2) * a + 3.0 * A * b2));

    const T W4 =
        -(p6 -
          ((4.0 * a + 4.0 * A) * q + a2 + 10.0 * A * a - 9.0 * b2 + A2 + B2) * p4 -
          2.0 * b * B * (2.0 * q + 11.0 * a + A) * p3 +
          (16.0 * A * a * q2 +
           4.0 * (8.0 * A * a2 + (8.0 * A2 + 2.0 * B2) * a - 5.0 * A * b2) * q + 8.0 * A * a3 +
           (32.0 * A2 + 14.0 * B2) * a2 + (-42.0 * A * b2 + 8.0 * A3 + 18.0 * B2 * A) * a +
           (-6.0 * A2 - 5.0 * B2) * b2) *
              p2 +
          2.0 * b * B * (48.0 * A * a * q + 44.0 * A * a2 + (4.0 * A2 + 7.0 * B2) * a + A * b2) *
              p -
          64.0 * A2 * a2 * q2 - 16.0 * a2 * A * (4.0 * A * a + 4.0 * A2 + 7.0 * B2) * q -
          16.0 * A2 * a4 - (32.0 * A3 + 56.0 * B2 * A) * a3 +
          (24.0 * A2 * b2 - 16.0 * A4 - 56.0 * B2 * A2 - 9.0 * B4) * a2 +
          (24.0 * A3 - 6.0 * B2 * A) * b2 * a + 3.0 * A2 * b4);

    const T W3 =
        -2.0 *
        (2.0 * b * p5 - B * (q + 4.0 * a) * p4 -
         b * ((14.0 * a + 2.0 * A) * q + 2.0 * a2 + 12.0 * A * a - 8.0 * b2 + 2.0 * A2 + B2) *
             p3 +
         B * (4.0 * a * q2 + (20.0 * a2 + 20.0 * A * a - 7.0 * b2) * q + 4.0 * a3 +
              24.0 * A * a2 + (-24.0 * b2 + 4.0 * A2 + 3.0 * B2) * a - A * b2) *
             p2 +
         b * (32.0 * A * a * q2 + (56.0 * A * a2 + (8.0 * A2 + 26.0 * B2) * a - 6.0 * A * b2) * q +
              8.0 * A * a3 + (16.0 * A2 + 26.0 * B2) * a2 +
              (-18.0 * A * b2 + 8.0 * A3 + 2.0 * B2 * A) * a + (-6.0 * A2 - B2) * b2) *
             p -
         B * (80.0 * A * a2 * q2 +
              4.0 * a * (20.0 * A * a2 + (16.0 * A2 + 6.0 * B2) * a - 3.0 * A * b2) * q +
              16.0 * A * a4 + (32.0 * A2 + 12.0 * B2) * a3 +
              (-28.0 * A * b2 + 16.0 * A3 + 16.0 * B2 * A) * a2 + (-24.0 * A2 - B2) * b2 * a -
              A * b4));

    const T W2 =
        2.0 *
        (((3.0 * a - A) * q - 3.0 * b2) * p4 + b * B * (3.0 * q + 9.0 * a + A) * p3 +
         (-2.0 * (6.0 * a2 + 2.0 * A * a - b2) * q2 -
          (4.0 * a3 + 16.0 * A * a2 + (-27.0 * b2 - 4.0 * A2 + 9.0 * B2) * a + 4.0 * A * b2) * q +
          3.0 * (b2 - 3.0 * B2) * a2 + (9.0 * A * b2 - B2 * A) * a - 7.0 * b4 + 2.0 * A2 * b2) *
             p2 -
         b * B *
             (28.0 * a * q2 + (60.0 * a2 - 5.0 * b2) * q + 8.0 * a3 + 20.0 * A * a2 -
              (19.0 * b2 - 12.0 * A2) * a - 5.0 * A * b2) *
             p +
         32.0 * A * a2 * q3 +
         4.0 * a * (12.0 * A * a2 + (4.0 * A2 + 11.0 * B2) * a - 3.0 * A * b2) * q2 +
         (16.0 * A * a4 + (16.0 * A2 + 44.0 * B2) * a3 + (-32.0 * A * b2 + 40.0 * B2 * A) * a2 -
          (12.0 * A2 + 9.0 * B2) * b2 * a + A * b4) *
             q +
         8.0 * B2 * a4 + (-4.0 * A * b2 + 20.0 * B2 * A) * a3 +
         (-(4.0 * A2 + 15.0 * B2) * b2 + 12.0 * B2 * A2 + 3.0 * B4) * a2 +
         (5.0 * A * b4 - 15.0 * B2 * A * b2) * a + 2.0 * A2 * b4);

    const T W1 =
        2.0 *
        (2.0 * b * (q2 + (3.0 * a - A) * q - b2) * p3 -
         B * (8.0 * a * q2 + (12.0 * a2 - 4.0 * A * a + b2) * q - 6.0 * b2 * a - 2.0 * A * b2) *
             p2 -
         b * (8.0 * a * q3 + (32.0 * a2 - 8.0 * A * a - 2.0 * b2) * q2 +
              (8.0 * a3 + 8.0 * A * a2 + (-20.0 * b2 - 2.0 * B2) * a + 2.0 * A * b2) * q +
              (-2.0 * b2 + 6.0 * B2) * a2 + (-2.0 * A * b2 + 6.0 * B2 * A) * a + 3.0 * b4 -
              B2 * b2) *
             p +
         B * (32.0 * a2 * q3 + 4.0 * a * (12.0 * a2 + 4.0 * A * a - 3.0 * b2) * q2 +
              (16.0 * a4 + 16.0 * A * a3 + (-32.0 * b2 + 8.0 * B2) * a2 - 12.0 * A * b2 * a +
               b4) *
                  q +
              (-4.0 * b2 + 4.0 * B2) * a3 + (-4.0 * A * b2 + 4.0 * B2 * A) * a2 +
              (5.0 * b4 - 3.0 * B2 * b2) * a + 2.0 * A * b4));

    const T W0 =
        q2 * p4 - 2.0 * B * b * q * p3 +
        (-8.0 * a * q3 + (-8.0 * a2 + 2.0 * b2) * q2 + (6.0 * b2 + 2.0 * B2) * a * q - b4 +
         B2 * b2) *
            p2 +
        2.0 * b * B * (4.0 * a * q2 + (-4.0 * a2 - b2) * q + (b2 - B2) * a) * p +
        16.0 * a2 * q4 + 8.0 * a * (4.0 * a2 - b2) * q3 +
        (16.0 * a4 + (-32.0 * b2 + 8.0 * B2) * a2 + b4) * q2 -
        2.0 * a * ((4.0 * b2 - 4.0 * B2) * a2 - 5.0 * b4 + 3.0 * B2 * b2) * q +
        (b - B) * (b + B) * ((b2 - B2) * a2 - b4);

    return {W0, W1, W2, W3, W4, W5, W6};
}

inline std::array<Complex, 7> w_coefficients(Complex a, Complex b, double p, double q) {
    return w_formulas<Complex>(a, b, Complex{p, 0.0}, Complex{q, 0.0});
}

inline double w_cancellation_scale(Complex a, Complex b, double p, double q) {
    const auto m = w_formulas<Mag>(Mag{std::abs(a)}, Mag{std::abs(b)}, Mag{std::abs(p)},
                                   Mag{std::abs(q)});
    double worst = 0.0;
    for (const Mag& x : m) worst = std::max(worst, x.v);
    return worst;
}

// Same coefficients in compensated arithmetic. The roots of a sextic with a
// near-sixfold cluster move by about (coefficient error)^(1/6), so double
// formation alone smears such a cluster by ~1e-3 of the root magnitude; the
// compensated copy keeps enough digits for a Taylor shift to resolve it.
inline std::array<poly::detail::DDComplex, 7> w_coefficients_compensated(const Conic& c) {
    const double m = coefficient_scale(c);
    using poly::detail::ddc_from;
    return w_formulas<poly::detail::DDComplex>(ddc_from(c.a / m), ddc_from(c.b / m),
                                               ddc_from(Complex{c.p / m, 0.0}),
                                               ddc_from(Complex{c.q / m, 0.0}));
}

} // namespace detail

// The coefficients are homogeneous of degree 6 in (a, b, p, q), so the inputs
// are normalized to unit scale first and the outputs to unit magnitude; both
// rescalings leave the root set untouched. Degeneracy means the formulas
// cancelled to numerical noise, which is measured against the term scale the
// same expressions produce without any cancellation.
inline SexticF4 f4_coefficients(const Conic& c) {
    if (classify_conic(c) == ConicClass::DegenerateOrLine)
        throw std::invalid_argument("f4_coefficients: degenerate conic");
    const double m = coefficient_scale(c);
    auto w = detail::w_coefficients(c.a / m, c.b / m, c.p / m, c.q / m);
    double wmax = 0.0;
    for (const Complex& x : w) wmax = std::max(wmax, std::abs(x));
    const double scale = detail::w_cancellation_scale(c.a / m, c.b / m, c.p / m, c.q / m);
    if (wmax <= 1e-10 * scale) throw std::domain_error("confocal degeneracy");
    for (Complex& x : w) x /= wmax;
    return SexticF4{w, c};
}

// Quartic in z (ascending) whose multiple roots mark tangency between the
// conic and the confocal curve of parameter r2.
inline poly::Poly s_quartic(const Conic& c, double r2) {
    const Complex a = c.a, b = c.b, A = std::conj(c.a), B = std::conj(c.b);
    const double p = c.p, q = c.q;
    const Complex a2 = a * a, b2 = b * b;
    const double p2 = p * p;
    const double r2_2 = r2 * r2, r2_3 = r2_2 * r2, r2_4 = r2_3 * r2;

    const Complex pm = p - a - A; // p minus a minus conj(a)
    const Complex c4 = 4.0 * A * a * r2_2 + 2.0 * ((a + A) * p - 4.0 * A * a) * r2 + pm * pm;
    const Complex c3 = 4.0 * B * a * r2_2 + 2.0 * (B * p + (b - 4.0 * B) * a + A * b) * r2 +
                       2.0 * (b - B) * pm;
    const Complex c2 =
        2.0 * a * p * r2_3 + (p2 - 6.0 * a * p + 4.0 * a * q + 2.0 * a2 - 2.0 * A * a) * r2_2 -
        2.0 * (p2 - (q + 2.0 * a) * p + 4.0 * a * q + 2.0 * a2 - 2.0 * A * a - B * b) * r2 -
        2.0 * q * p + (2.0 * a + 2.0 * A) * q + b2 - 2.0 * B * b + B * B;
    const Complex c1 = 2.0 * b * a * r2_3 + 2.0 * (b * p + (-3.0 * b - B) * a) * r2_2 -
                       2.0 * (2.0 * b * p - b * q + (-2.0 * b - 2.0 * B) * a) * r2 -
                       2.0 * (b - B) * q;
    const Complex c0 = a2 * r2_4 - 4.0 * a2 * r2_3 + (-2.0 * a * q + 4.0 * a2 + b2) * r2_2 +
                       (4.0 * a * q - 2.0 * b2) * r2 + q * q;
    return poly::Poly{c0, c1, c2, c3, c4};
}

// F1 vanishes where the conic meets the imaginary axis, F2 the real axis.
inline poly::Poly factor_f1(const Conic& c) {
    return poly::Poly{Complex{-c.q, 0.0}, c.b - std::conj(c.b),
                      Complex{c.p, 0.0} - c.a - std::conj(c.a)};
}

inline poly::Poly factor_f2(const Conic& c) {
    return poly::Poly{Complex{c.q, 0.0}, c.b + std::conj(c.b),
                      Complex{c.p, 0.0} + c.a + std::conj(c.a)};
}

// True iff the conic crosses the closed segment [-1, 1] on the real axis.
inline bool segment_blocked(const Conic& c) {
    const double qa = c.p + 2.0 * c.a.real();
    const double qb = 2.0 * c.b.real();
    const double qc = c.q;
    if (qa == 0.0) {
        if (qb == 0.0) return qc == 0.0;
        const double root = -qc / qb;
        return root >= -1.0 && root <= 1.0;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    for (double root : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)})
        if (root >= -1.0 && root <= 1.0) return true;
    return false;
}

enum class TangencyKind { Ellipse, Hyperbola, Undetermined };

struct TangencyPoint {
    Complex point;
    double on_curve_residual;
    double sum; // |z-1| + |z+1|
    TangencyKind tangency_kind;
};

struct TangencySolution {
    std::vector<TangencyPoint> points; // sorted by (re, im)
    std::optional<int> minimizer_index;
};

namespace detail {

inline TangencyKind classify_tangency(const Conic& c, Complex z) {
    const Complex normal = c.p * z + 2.0 * c.a * std::conj(z) + c.b; // 2 d/d(conj z)
    const double nn = std::abs(normal);
    if (nn < 1e-9) return TangencyKind::Undetermined;
    const Complex nhat = normal / nn;

    const double d1 = std::abs(z - 1.0), d2 = std::abs(z + 1.0);
    if (d1 < 1e-12 || d2 < 1e-12) return TangencyKind::Undetermined;
    const Complex ge = (z - 1.0) / d1 + (z + 1.0) / d2;
    const Complex gh = (z - 1.0) / d1 - (z + 1.0) / d2;

    double cross_e = std::numeric_limits<double>::infinity();
    double cross_h = std::numeric_limits<double>::infinity();
    if (std::abs(ge) > 1e-9) cross_e = std::abs((std::conj(nhat) * (ge / std::abs(ge))).imag());
    if (std::abs(gh) > 1e-9) cross_h = std::abs((std::conj(nhat) * (gh / std::abs(gh))).imag());

    const bool epar = cross_e <= 1e-6, hpar = cross_h <= 1e-6;
    if (epar && (!hpar || cross_e <= cross_h)) return TangencyKind::Ellipse;
    if (hpar) return TangencyKind::Hyperbola;
    return TangencyKind::Undetermined;
}

} // namespace detail

inline TangencySolution tangency_points(const Conic& c) {
    const SexticF4 f4 = f4_coefficients(c);
    const poly::RootSet rs = poly::poly_roots(sextic_poly(f4));

    const double m = coefficient_scale(c);
    TangencySolution sol;
    for (Complex u : rs.roots) {
        const double residual = std::abs(conic_eval(c, u));
        const double tol = 1e-6 * m * (1.0 + std::abs(u)) * (1.0 + std::abs(u));
        if (residual > tol) continue;
        TangencyPoint pt;
        pt.point = u;
        pt.on_curve_residual = residual;
        pt.sum = std::abs(u - 1.0) + std::abs(u + 1.0);
        pt.tangency_kind = detail::classify_tangency(c, u);
        sol.points.push_back(pt);
    }
    if (sol.points.empty()) throw std::runtime_error("no tangency found");
    std::sort(sol.points.begin(), sol.points.end(),
              [](const TangencyPoint& x, const TangencyPoint& y) {
                  if (x.point.real() != y.point.real()) return x.point.real() < y.point.real();
                  return x.point.imag() < y.point.imag();
              });
    if (!segment_blocked(c)) {
        int best = 0;
        for (int i = 1; i < static_cast<int>(sol.points.size()); ++i)
            if (sol.points[static_cast<std::size_t>(i)].sum <
                sol.points[static_cast<std::size_t>(best)].sum)
                best = i;
        sol.minimizer_index = best;
    }
    return sol;
}

// Quartic factor (ascending) that the circle case a=0, p=1 of the sextic
// reduces to after dividing out the linear factor 2bz + b^2 + 1.
inline poly::Poly circle_remark_quartic(Complex b, double q) {
    const Complex B = std::conj(b);
    const Complex b2 = b * b, b3 = b2 * b, b4 = b2 * b2, B2 = B * B;
    const double q2 = q * q;
    return poly::Poly{(b2 + 1.0) * q2 - 2.0 * B * b * q - b4 + B2 * b2,
                      2.0 * b * q2 + 2.0 * B * b2 * q - 4.0 * b3,
                      6.0 * B * b * q - 6.0 * b2,
                      2.0 * B * q + (2.0 * B2 - 4.0) * b,
                      B2 - 1.0};
}

// Checks that the generic sextic at (a=0, p=1) factors as
// (2bz + b^2 + 1) * (remark quartic) up to one common scalar.
inline bool verify_circle_specialization(Complex b, double q, double tol = 1e-9) {
    if (!(std::norm(b) > q)) throw std::domain_error("imaginary circle");
    const SexticF4 f4 = f4_coefficients(Conic{Complex{0.0, 0.0}, b, 1.0, q});
    const poly::Poly sextic = sextic_poly(f4);

    double top = 0.0;
    for (const Complex& x : sextic) top = std::max(top, std::abs(x));
    if (std::abs(sextic[6]) > 1e-9 * top) return false; // circle case must kill z^6

    // synthetic division of w5..w0 by the linear factor (ascending [l0, l1])
    const Complex l0 = b * b + 1.0, l1 = 2.0 * b;
    poly::Poly quartic(5);
    if (std::abs(l1) <= 1e-14 * std::max(1.0, std::abs(l0))) {
        if (std::abs(sextic[5]) > 1e-9 * top) return false;
        for (int k = 0; k <= 4; ++k)
            quartic[static_cast<std::size_t>(k)] = sextic[static_cast<std::size_t>(k)] / l0;
    } else {
        Complex carry = sextic[5];
        for (int k = 4; k >= 0; --k) {
            quartic[static_cast<std::size_t>(k)] = carry / l1;
            carry = sextic[static_cast<std::size_t>(k)] -
                    quartic[static_cast<std::size_t>(k)] * l0;
        }
        const double rem_scale = std::max(top, 1e-300);
        if (std::abs(carry) > tol * rem_scale) return false;
    }

    const poly::Poly expect = circle_remark_quartic(b, q);
    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t k = 0; k < expect.size(); ++k)
        if (std::abs(expect[k]) > best) best = std::abs(expect[k]), pivot = k;
    if (best == 0.0 || std::abs(quartic[pivot]) == 0.0) return false;
    const Complex scale = quartic[pivot] / expect[pivot];
    double worst = 0.0, mag = 0.0;
    for (std::size_t k = 0; k < expect.size(); ++k) {
        worst = std::max(worst, std::abs(quartic[k] - scale * expect[k]));
        mag = std::max(mag, std::abs(scale * expect[k]));
    }
    return worst <= tol * std::max(mag, 1e-300);
}

} // namespace alhazen::conic
