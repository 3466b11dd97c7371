#pragma once

// Catacaustic of the unit circle for a given radiant point: reflected-ray
// lines, the parametric envelope, its implicit (discriminant) form, and
// curve sampling with the two Apollonian comparison loci.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "alhazen/poly.hpp"

namespace alhazen::caustic {

// The line alpha*z + beta*conj(z) + gamma = 0.
struct RayLine {
    Complex alpha;
    Complex beta;
    Complex gamma;
};

inline Complex ray_eval(const RayLine& ray, Complex z) {
    return ray.alpha * z + ray.beta * std::conj(z) + ray.gamma;
}

// A real line requires |alpha| = |beta| and, after rotating the equation so
// beta becomes conj(alpha), a real constant term.
inline bool is_real_line(const RayLine& ray, double tol = 1e-10) {
    const double scale =
        std::max({std::abs(ray.alpha), std::abs(ray.beta), std::abs(ray.gamma), 1e-300});
    if (std::abs(std::abs(ray.alpha) - std::abs(ray.beta)) > tol * scale) return false;
    const Complex mismatch =
        std::conj(ray.gamma) * ray.alpha - std::conj(ray.beta) * ray.gamma;
    return std::abs(mismatch) <= tol * scale * scale;
}

inline RayLine reflected_ray(Complex z1, Complex u) {
    if (std::abs(u - z1) <= 1e-12) throw std::invalid_argument("radiant on mirror");
    const Complex zc1 = std::conj(z1);
    return RayLine{u - z1, u * u * u * (zc1 * u - 1.0), -u * (zc1 * u * u - z1)};
}

inline Complex caustic_point(Complex z1, double phi) {
    const Complex u = std::polar(1.0, phi);
    const Complex zc1 = std::conj(z1);
    const double n1 = std::norm(z1);
    const Complex den = 3.0 * zc1 * u * u - 2.0 * (2.0 * n1 + 1.0) * u + 3.0 * z1;
    if (std::abs(den) <= 1e-12) throw std::domain_error("parametric singularity");
    const Complex num = u * (zc1 * zc1 * u * u * u - 3.0 * n1 * u + 2.0 * z1);
    return num / den;
}

inline double caustic_implicit(Complex z1, Complex z) {
    const Complex w = z + z1;
    const double cube = std::norm(w) - 4.0 * std::norm(z1) * std::norm(z);
    const double im = (w * w * std::conj(z1) * std::conj(z)).imag();
    return 4.0 * cube * cube * cube + 108.0 * im * im;
}

// Magnitude sum of the implicit form's two terms before cancellation; the
// natural yardstick for calling caustic_implicit "zero" at a point.
inline double caustic_residual_scale(Complex z1, Complex z) {
    const Complex w = z + z1;
    const double sum = std::norm(w) + 4.0 * std::norm(z1) * std::norm(z);
    const double im = std::abs(w * w * std::conj(z1) * std::conj(z));
    return 4.0 * sum * sum * sum + 108.0 * im * im;
}

// Apollonius circle |z + z1| = k|z1||z|, degenerating to a line through
// -z1/2 when k|z1| = 1.
struct ApollonianLocus {
    bool is_line;
    Complex center;     // circle case
    double radius;      // circle case
    Complex line_point; // line case
    Complex line_dir;   // line case, unit vector
};

inline ApollonianLocus e_locus(Complex z1, int k) {
    if (k != 1 && k != 2) throw std::invalid_argument("e_locus: k must be 1 or 2");
    const double c2 = std::norm(z1);
    const double denom = 1.0 - static_cast<double>(k * k) * c2;
    if (std::abs(denom) <= 1e-12) {
        const Complex dir = Complex{0.0, 1.0} * z1 / std::abs(z1);
        return ApollonianLocus{true, {}, 0.0, -0.5 * z1, dir};
    }
    return ApollonianLocus{false, -z1 / denom, static_cast<double>(k) * c2 / std::abs(denom),
                           {}, {}};
}

struct CausticSample {
    double phi;
    Complex point;
};

struct CausticCurve {
    Complex radiant;
    std::vector<CausticSample> samples; // ordered by phi, singular angles skipped
    bool closed;                        // no parametric singularity on the circle
    ApollonianLocus e1_circle;
    ApollonianLocus e2_circle;
};

inline CausticCurve caustic_sample(Complex z1, int n) {
    if (n < 8) throw std::invalid_argument("caustic_sample: need at least 8 samples");
    CausticCurve curve;
    curve.radiant = z1;
    const double c = std::abs(z1);
    // singular angles exist exactly when (2c-1)(c-1) <= 0
    curve.closed = (2.0 * c - 1.0) * (c - 1.0) > 0.0;
    curve.e1_circle = e_locus(z1, 1);
    curve.e2_circle = e_locus(z1, 2);
    curve.samples.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
        try {
            curve.samples.push_back({phi, caustic_point(z1, phi)});
        } catch (const std::domain_error&) {
            // skip the singular angle; consumers tolerate the gap
        }
    }
    return curve;
}

} // namespace alhazen::caustic
