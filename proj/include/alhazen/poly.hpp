#pragma once

// Complex-coefficient polynomial arithmetic and a simultaneous-iteration
// root finder. Every other header builds on this one.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alhazen {

using Complex = std::complex<double>;

namespace poly {

// Coefficients in ascending order: p[k] multiplies z^k.
using Poly = std::vector<Complex>;

struct RootSet {
    std::vector<Complex> roots;              // cluster representatives, sorted by (re, im)
    std::vector<double> residuals;           // |P(r)| / sum_k |c_k||r|^k
    std::vector<int> multiplicity_estimates; // cluster sizes; they sum to the trimmed degree
};

struct SolveOptions {
    double residual_tol = 1e-10;
    double trim_eps = 1e-12;   // relative to the largest coefficient magnitude
    double cluster_eps = 1e-6; // relative to max(1, largest root magnitude)
    int max_iterations = 160;
    // warm start: used when its size equals the trimmed degree and the
    // guesses are pairwise distinct; ignored otherwise
    std::vector<Complex> initial_guesses;
};

class RootSolveError : public std::runtime_error {
public:
    RootSolveError(const std::string& what, RootSet partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const RootSet& partial() const noexcept { return partial_; }

private:
    RootSet partial_;
};

inline Complex poly_eval(const Poly& p, Complex z) {
    if (p.empty()) throw std::invalid_argument("poly_eval: empty polynomial");
    Complex acc{0.0, 0.0};
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

// |P(z)| relative to sum_k |c_k||z|^k, so a small value certifies z as a root
// independently of coefficient scale.
inline double poly_residual(const Poly& p, Complex z) {
    double scale = 0.0, zk = 1.0;
    const double az = std::abs(z);
    for (const Complex& c : p) {
        scale += std::abs(c) * zk;
        zk *= az;
    }
    if (scale == 0.0) return 0.0;
    return std::abs(poly_eval(p, z)) / scale;
}

inline Poly poly_derivative(const Poly& p) {
    if (p.size() <= 1) return Poly{Complex{0.0, 0.0}};
    Poly d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
    return d;
}

struct TrimResult {
    Poly poly;
    int dropped = 0;
};

inline TrimResult poly_trim(const Poly& p, double eps = 1e-12) {
    if (eps < 0.0) throw std::invalid_argument("poly_trim: eps must be nonnegative");
    double top = 0.0;
    for (const Complex& c : p) top = std::max(top, std::abs(c));
    if (top == 0.0) throw std::domain_error("zero polynomial");
    std::size_t n = p.size();
    while (n > 1 && std::abs(p[n - 1]) <= eps * top) --n;
    return TrimResult{Poly(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n)),
                      static_cast<int>(p.size() - n)};
}

namespace detail {

// Error-free transforms; a (hi, lo) pair carries roughly twice double
// precision through the Taylor shift below.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double t = s - a;
    return {s, (a - (s - t)) + (b - t)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    const double lo = s.lo + a.lo + b.lo;
    s = two_sum(s.hi, lo);
    return s;
}

inline DD dd_mul(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    const double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    p = two_sum(p.hi, lo);
    return p;
}

inline DD dd_mul(DD a, double b) {
    DD p = two_prod(a.hi, b);
    const double lo = p.lo + a.lo * b;
    p = two_sum(p.hi, lo);
    return p;
}

struct DDComplex {
    DD re;
    DD im;
};

inline DDComplex ddc_from(Complex z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }

inline Complex ddc_round(DDComplex z) {
    return {z.re.hi + z.re.lo, z.im.hi + z.im.lo};
}

inline DDComplex operator+(DDComplex a, DDComplex b) {
    return {dd_add(a.re, b.re), dd_add(a.im, b.im)};
}

inline DDComplex operator-(DDComplex a) {
    return {DD{-a.re.hi, -a.re.lo}, DD{-a.im.hi, -a.im.lo}};
}

inline DDComplex operator-(DDComplex a, DDComplex b) { return a + (-b); }

inline DDComplex operator*(DDComplex a, DDComplex b) {
    const DD rr = dd_mul(a.re, b.re);
    const DD ii = dd_mul(a.im, b.im);
    const DD ri = dd_mul(a.re, b.im);
    const DD ir = dd_mul(a.im, b.re);
    return {dd_add(rr, DD{-ii.hi, -ii.lo}), dd_add(ri, ir)};
}

inline DDComplex operator*(double s, DDComplex x) {
    return {dd_mul(x.re, s), dd_mul(x.im, s)};
}

inline DDComplex operator*(DD s, DDComplex x) {
    return {dd_mul(s, x.re), dd_mul(s, x.im)};
}

inline DDComplex conj(DDComplex z) { return {z.re, DD{-z.im.hi, -z.im.lo}}; }

inline std::vector<Complex> initial_guesses(const Poly& monic) {
    const std::size_t n = monic.size() - 1;
    double radius;
    if (std::abs(monic.front()) > 0.0)
        radius = std::pow(std::abs(monic.front()), 1.0 / static_cast<double>(n));
    else
        radius = 0.5;
    double cauchy = 0.0;
    for (std::size_t k = 0; k < n; ++k) cauchy = std::max(cauchy, std::abs(monic[k]));
    radius = std::clamp(std::min(radius, 1.0 + cauchy), 1e-6, 1e6);
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        // fixed angular offset so no guess starts on a symmetry axis
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n) + 0.45;
        x[i] = radius * Complex{std::cos(theta), std::sin(theta)};
    }
    return x;
}

inline bool lex_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

} // namespace detail

// Coefficients of p(center + scale*v) in v, ascending. Near a root cluster the
// shifted tail falls many orders of magnitude below the input coefficients, so
// the synthetic-division shift runs in compensated arithmetic; plain double
// returns rounding noise there and the cluster cannot be resolved. The
// compensated overload exists because even exact shifting cannot recover
// structure the input coefficients have already lost to rounding.
inline Poly poly_shift_scale(std::vector<detail::DDComplex> q, Complex center, double scale) {
    if (q.empty()) throw std::invalid_argument("poly_shift_scale: empty polynomial");
    const std::size_t n = q.size();
    const detail::DDComplex c = detail::ddc_from(center);
    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t j = n - 1; j > k; --j) q[j - 1] = q[j - 1] + c * q[j];
    Poly out(n);
    double pw = 1.0;
    for (std::size_t k = 0; k < n; ++k, pw *= scale) out[k] = detail::ddc_round(q[k]) * pw;
    return out;
}

inline Poly poly_shift_scale(const Poly& p, Complex center, double scale) {
    std::vector<detail::DDComplex> q(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) q[k] = detail::ddc_from(p[k]);
    return poly_shift_scale(std::move(q), center, scale);
}

// Aberth-Ehrlich simultaneous iteration with a Newton polish and cluster-based
// multiplicity estimation. Deterministic: fixed initial configuration, fixed
// ordering of the result.
inline RootSet poly_roots(const Poly& p_in, const SolveOptions& opt = {}) {
    const Poly q = poly_trim(p_in, opt.trim_eps).poly;
    if (q.size() < 2)
        throw std::invalid_argument("poly_roots: trimmed degree must be at least 1");
    const std::size_t n = q.size() - 1;

    Poly m(q);
    const Complex lead = m.back();
    for (Complex& c : m) c /= lead;
    const Poly d = poly_derivative(m);

    std::vector<Complex> x;
    if (n == 1) {
        x.assign(1, -m[0]);
    } else {
        if (opt.initial_guesses.size() == n) {
            x = opt.initial_guesses;
            bool usable = true;
            for (std::size_t i = 0; i < n && usable; ++i) {
                if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag())) usable = false;
                for (std::size_t j = i + 1; j < n; ++j)
                    if (std::abs(x[i] - x[j]) <= 1e-12 * (1.0 + std::abs(x[i]))) usable = false;
            }
            if (!usable) x = detail::initial_guesses(m);
        } else {
            x = detail::initial_guesses(m);
        }
        for (int iter = 0; iter < opt.max_iterations; ++iter) {
            double worst_step = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const Complex pv = poly_eval(m, x[i]);
                if (std::abs(pv) == 0.0) continue;
                const Complex dv = poly_eval(d, x[i]);
                if (std::abs(dv) < 1e-300) {
                    x[i] += Complex{1e-8, 1e-8} * (1.0 + std::abs(x[i]));
                    worst_step = 1.0;
                    continue;
                }
                const Complex w = pv / dv;
                Complex repulsion{0.0, 0.0};
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i) continue;
                    Complex diff = x[i] - x[j];
                    if (std::abs(diff) < 1e-300) diff = Complex{1e-12, 1e-12};
                    repulsion += 1.0 / diff;
                }
                const Complex denom = 1.0 - w * repulsion;
                const Complex delta = (std::abs(denom) < 1e-12) ? w : w / denom;
                x[i] -= delta;
                worst_step = std::max(worst_step, std::abs(delta) / (1.0 + std::abs(x[i])));
            }
            if (worst_step <= 5e-16) break;
        }
    }

    // Newton polish, guarded so two distinct roots can never collapse onto
    // one point and get misread as a multiple root.
    for (std::size_t i = 0; i < n; ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) dmin = std::min(dmin, std::abs(x[i] - x[j]));
        for (int step = 0; step < 3; ++step) {
            const Complex pv = poly_eval(m, x[i]);
            const Complex dv = poly_eval(d, x[i]);
            if (std::abs(dv) < 1e-300) break;
            const Complex delta = pv / dv;
            if (!(std::abs(delta) <= 0.45 * dmin)) break;
            const Complex cand = x[i] - delta;
            if (poly_residual(m, cand) >= poly_residual(m, x[i])) break;
            x[i] = cand;
        }
    }

    // cluster roots into multiplicity groups
    double xmax = 1.0;
    for (const Complex& xi : x) xmax = std::max(xmax, std::abs(xi));
    const double merge_dist = opt.cluster_eps * xmax;
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    const auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(x[i] - x[j]) <= merge_dist) parent[find(i)] = find(j);

    struct Cluster {
        Complex mean;
        int count;
    };
    std::vector<Cluster> clusters;
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(clusters.size());
            clusters.push_back({Complex{0.0, 0.0}, 0});
        }
        clusters[static_cast<std::size_t>(slot[r])].mean += x[i];
        clusters[static_cast<std::size_t>(slot[r])].count += 1;
    }
    for (Cluster& c : clusters) c.mean /= static_cast<double>(c.count);
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return detail::lex_less(a.mean, b.mean); });

    RootSet out;
    bool failed = false;
    for (const Cluster& c : clusters) {
        out.roots.push_back(c.mean);
        out.multiplicity_estimates.push_back(c.count);
        const double res = poly_residual(q, c.mean);
        out.residuals.push_back(res);
        if (!(res <= opt.residual_tol)) failed = true;
    }
    if (failed)
        throw RootSolveError("poly_roots: residual tolerance not met after iteration cap", out);
    return out;
}

// Standard quartic discriminant from the coefficients (ascending input).
inline Complex quartic_discriminant(const Poly& p_in, double trim_eps = 1e-12) {
    const Poly t = poly_trim(p_in, trim_eps).poly;
    if (t.size() != 5)
        throw std::invalid_argument("quartic_discriminant: degree must be exactly 4");
    const Complex e = t[0], d = t[1], c = t[2], b = t[3], a = t[4];
    return 256.0 * a * a * a * e * e * e - 192.0 * a * a * b * d * e * e -
           128.0 * a * a * c * c * e * e + 144.0 * a * a * c * d * d * e -
           27.0 * a * a * d * d * d * d + 144.0 * a * b * b * c * e * e -
           6.0 * a * b * b * d * d * e - 80.0 * a * b * c * c * d * e +
           18.0 * a * b * c * d * d * d + 16.0 * a * c * c * c * c * e -
           4.0 * a * c * c * c * d * d - 27.0 * b * b * b * b * e * e +
           18.0 * b * b * b * c * d * e - 4.0 * b * b * b * d * d * d -
           4.0 * b * b * c * c * c * e + b * b * c * c * d * d;
}

// Substitute u = (1+it)/(1-it) into a quartic and clear the denominator:
// Q(t) = sum_k c_k (1+it)^k (1-it)^(4-k) / (-2i). For self-inversive quartics
// (c4 = conj(c0) up to the sign pattern of a reflection quartic) the result
// has real coefficients; imaginary dust below 1e-12 of the coefficient scale
// is zeroed.
inline Poly cayley_substitute(const Poly& p_in, double trim_eps = 1e-12) {
    const Poly t = poly_trim(p_in, trim_eps).poly;
    if (t.size() != 5)
        throw std::invalid_argument("cayley_substitute: degree must be exactly 4");
    Poly acc(5, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < 5; ++k) {
        Poly factor{Complex{1.0, 0.0}}; // ascending in t
        for (std::size_t j = 0; j < k; ++j) {
            Poly next(factor.size() + 1, Complex{0.0, 0.0});
            for (std::size_t i = 0; i < factor.size(); ++i) {
                next[i] += factor[i];
                next[i + 1] += factor[i] * Complex{0.0, 1.0};
            }
            factor = std::move(next);
        }
        for (std::size_t j = k; j < 4; ++j) {
            Poly next(factor.size() + 1, Complex{0.0, 0.0});
            for (std::size_t i = 0; i < factor.size(); ++i) {
                next[i] += factor[i];
                next[i + 1] += factor[i] * Complex{0.0, -1.0};
            }
            factor = std::move(next);
        }
        for (std::size_t i = 0; i < 5; ++i) acc[i] += t[k] * factor[i];
    }
    double top = 0.0;
    for (Complex& c : acc) {
        c *= Complex{0.0, 0.5}; // divide by -2i
        top = std::max(top, std::abs(c));
    }
    for (Complex& c : acc)
        if (std::abs(c.imag()) <= 1e-12 * top) c = Complex{c.real(), 0.0};
    return acc;
}

} // namespace poly
} // namespace alhazen
