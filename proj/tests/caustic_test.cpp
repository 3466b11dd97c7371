#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "alhazen/caustic.hpp"
#include "alhazen/disk.hpp"
#include "oracles.hpp"

using alhazen::Complex;
using namespace alhazen::caustic;

namespace {

double locus_distance(const ApollonianLocus& locus, Complex z) {
    if (locus.is_line) {
        const Complex rel = (z - locus.line_point) / locus.line_dir;
        return std::abs(rel.imag());
    }
    return std::abs(std::abs(z - locus.center) - locus.radius);
}

} // namespace

TEST_CASE("reflected ray equals the reflection quartic in disguise", "[caustic]") {
    oracles::Rng rng(51001);
    for (int trial = 0; trial < 100; ++trial) {
        const Complex z1 = rng.annulus(0.1, 1.4);
        const Complex z = rng.box(1.5);
        const Complex u = std::polar(1.0, rng.uniform(0.0, 6.2831853));
        if (std::abs(u - z1) < 1e-6) continue;
        const RayLine ray = reflected_ray(z1, u);
        const alhazen::disk::PointPair pair{z1, z};
        const Complex lhs = ray_eval(ray, z);
        const Complex rhs = alhazen::poly::poly_eval(alhazen::disk::pa_quartic(pair), u);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
    CHECK_THROWS_WITH(reflected_ray(Complex{1.0, 0.0}, Complex{1.0, 0.0}), "radiant on mirror");
}

TEST_CASE("reflected rays are real lines obeying the reflection law", "[caustic]") {
    oracles::Rng rng(51002);
    for (int trial = 0; trial < 50; ++trial) {
        const Complex z1 = rng.annulus(0.1, 1.4);
        const Complex u = std::polar(1.0, rng.uniform(0.0, 6.2831853));
        if (std::abs(u - z1) < 1e-3) continue;
        const RayLine ray = reflected_ray(z1, u);

        CHECK(is_real_line(ray));
        // the mirror point lies on the ray
        const double scale = std::abs(ray.alpha) + std::abs(ray.beta) + std::abs(ray.gamma);
        CHECK(std::abs(ray_eval(ray, u)) <= 1e-12 * scale);
        // direction: the incident direction reflected across the tangent at u
        const Complex incident = (u - z1) / std::abs(u - z1);
        const Complex reflected = -u * u * std::conj(incident);
        CHECK(std::abs(ray.alpha * reflected + ray.beta * std::conj(reflected)) <=
              1e-10 * (std::abs(ray.alpha) + std::abs(ray.beta)));
    }

    CHECK(is_real_line(RayLine{Complex{1.0, 0.0}, Complex{1.0, 0.0}, Complex{1.0, 0.0}}));
    CHECK_FALSE(is_real_line(RayLine{Complex{1.0, 0.0}, Complex{2.0, 0.0}, Complex{0.0, 0.0}}));
    CHECK_FALSE(is_real_line(RayLine{Complex{1.0, 0.0}, Complex{1.0, 0.0}, Complex{0.0, 1.0}}));
}

TEST_CASE("envelope points are double reflection solutions", "[caustic]") {
    oracles::Rng rng(51003);
    for (int trial = 0; trial < 60; ++trial) {
        const Complex z1 = rng.annulus(0.15, 1.3);
        const double phi = rng.uniform(0.0, 6.2831853);
        Complex z;
        try {
            z = caustic_point(z1, phi);
        } catch (const std::domain_error&) {
            continue;
        }
        if (std::abs(z) < 1e-6 || std::abs(z) > 50.0) continue;
        const Complex u = std::polar(1.0, phi);
        const auto quartic = alhazen::disk::pa_quartic(alhazen::disk::PointPair{z1, z});
        CHECK(alhazen::poly::poly_residual(quartic, u) < 1e-8);
        CHECK(alhazen::poly::poly_residual(alhazen::poly::poly_derivative(quartic), u) < 1e-8);
    }
}

TEST_CASE("implicit form is the discriminant of the pair", "[caustic]") {
    oracles::Rng rng(51004);
    for (int trial = 0; trial < 60; ++trial) {
        const Complex z1 = rng.annulus(0.1, 1.4);
        const Complex z = rng.box(1.5);
        if (std::abs(z) < 1e-3) continue;
        const double lhs = caustic_implicit(z1, z);
        const double rhs = alhazen::disk::discriminant(alhazen::disk::PointPair{z1, z});
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }

    // the origin always lies on the positive side, the mirror image of the
    // radiant on the negative side
    for (Complex z1 : {Complex{0.4, 0.2}, Complex{0.9, -0.5}, Complex{1.3, 0.0}}) {
        CHECK(caustic_implicit(z1, Complex{0.0, 0.0}) > 0.0);
        CHECK(caustic_implicit(z1, -z1) < 0.0);
    }
}

TEST_CASE("parametric values and the singular angle", "[caustic]") {
    CHECK(oracles::close(caustic_point(Complex{0.5, 0.0}, 3.14159265358979323846),
                         Complex{-0.25, 0.0}, 1e-12));
    CHECK_THROWS_WITH(caustic_point(Complex{0.5, 0.0}, 0.0), "parametric singularity");

    // just off the singular angle the point is finite and still on the curve
    const Complex near = caustic_point(Complex{0.5, 0.0}, 1e-3);
    CHECK(std::abs(caustic_implicit(Complex{0.5, 0.0}, near)) <=
          1e-9 * caustic_residual_scale(Complex{0.5, 0.0}, near));

    // the singular angle exists exactly for moduli in [1/2, 1]
    CHECK_THROWS_AS(caustic_point(Complex{1.0, 0.0}, 0.0), std::domain_error);
    const double c = 0.8;
    const double phi_s = std::acos((2.0 * c * c + 1.0) / (3.0 * c));
    CHECK_THROWS_AS(caustic_point(Complex{c, 0.0}, phi_s), std::domain_error);
    CHECK_NOTHROW(caustic_point(Complex{0.3, 0.0}, 0.0));
    CHECK_NOTHROW(caustic_point(Complex{1.2, 0.0}, 0.0));
}

TEST_CASE("rotation equivariance of the envelope", "[caustic]") {
    oracles::Rng rng(51005);
    for (int trial = 0; trial < 25; ++trial) {
        const Complex z1 = rng.annulus(0.15, 1.3);
        const double phi = rng.uniform(0.1, 3.0);
        const double theta = rng.uniform(0.0, 6.2831853);
        Complex base;
        try {
            base = caustic_point(z1, phi);
        } catch (const std::domain_error&) {
            continue;
        }
        if (std::abs(base) > 50.0) continue;
        const Complex rotated = caustic_point(std::polar(1.0, theta) * z1, phi + theta);
        CHECK(std::abs(rotated - std::polar(1.0, theta) * base) <=
              1e-10 * std::max(1.0, std::abs(base)));
    }
}

TEST_CASE("apollonian loci", "[caustic]") {
    const ApollonianLocus e2 = e_locus(Complex{0.8, 0.0}, 2);
    REQUIRE_FALSE(e2.is_line);
    CHECK(e2.center.real() == Catch::Approx(0.8 / 1.56).margin(1e-12));
    CHECK(e2.radius == Catch::Approx(1.28 / 1.56).margin(1e-12));

    const ApollonianLocus e1 = e_locus(Complex{0.8, 0.0}, 1);
    REQUIRE_FALSE(e1.is_line);
    CHECK(e1.center.real() == Catch::Approx(-0.8 / 0.36).margin(1e-12));
    CHECK(e1.radius == Catch::Approx(0.64 / 0.36).margin(1e-12));

    // k|z1| = 1 degenerates the circle into a perpendicular line
    const ApollonianLocus line = e_locus(Complex{0.5, 0.0}, 2);
    REQUIRE(line.is_line);
    CHECK(oracles::close(line.line_point, Complex{-0.25, 0.0}, 1e-15));
    CHECK(std::abs(line.line_dir.real()) < 1e-15);

    // membership: |z + z1| = k |z1| |z| characterizes each locus
    oracles::Rng rng(51006);
    for (int k : {1, 2}) {
        const Complex z1 = rng.annulus(0.2, 1.3);
        const ApollonianLocus locus = e_locus(z1, k);
        if (locus.is_line) continue;
        for (int j = 0; j < 8; ++j) {
            const Complex z =
                locus.center + std::polar(locus.radius, rng.uniform(0.0, 6.2831853));
            CHECK(std::abs(z + z1) ==
                  Catch::Approx(static_cast<double>(k) * std::abs(z1) * std::abs(z)).margin(1e-10));
        }
    }

    CHECK_THROWS_AS(e_locus(Complex{0.4, 0.0}, 3), std::invalid_argument);
}

TEST_CASE("cusps sit on the doubling locus", "[caustic]") {
    // closed case: four cusps, two of them on the axis
    for (double c : {0.3, 0.8, 1.2}) {
        const ApollonianLocus e2 = e_locus(Complex{c, 0.0}, 2);
        for (double phi : {0.0, 3.14159265358979323846}) {
            Complex z;
            try {
                z = caustic_point(Complex{c, 0.0}, phi);
            } catch (const std::domain_error&) {
                continue;
            }
            CHECK(locus_distance(e2, z) < 1e-9);
        }
    }
    CHECK(oracles::close(caustic_point(Complex{0.3, 0.0}, 0.0), Complex{-0.75, 0.0}, 1e-12));
    CHECK(oracles::close(caustic_point(Complex{0.8, 0.0}, 0.0), Complex{4.0 / 3.0, 0.0}, 1e-12));
    CHECK(oracles::close(caustic_point(Complex{1.2, 0.0}, 0.0), Complex{6.0 / 7.0, 0.0}, 1e-12));

    // boundary modulus 1/2: three cusps on the vertical line through -1/4
    const ApollonianLocus line = e_locus(Complex{0.5, 0.0}, 2);
    for (double phi : {1.0471975511965976, 3.14159265358979323846, 5.235987755982988}) {
        const Complex z = caustic_point(Complex{0.5, 0.0}, phi);
        CHECK(locus_distance(line, z) < 1e-12);
    }
    CHECK(oracles::close(caustic_point(Complex{0.5, 0.0}, 1.0471975511965976),
                         Complex{-0.25, 0.4330127018922193}, 1e-12));
}

TEST_CASE("sampled curves", "[caustic]") {
    const CausticCurve closed = caustic_sample(Complex{0.3, 0.0}, 64);
    CHECK(closed.closed);
    CHECK(closed.samples.size() == 64);

    const CausticCurve half = caustic_sample(Complex{0.5, 0.0}, 64);
    CHECK_FALSE(half.closed);
    CHECK(half.samples.size() == 63); // the grid hits the singular angle at zero

    const CausticCurve open = caustic_sample(Complex{0.8, 0.0}, 64);
    CHECK_FALSE(open.closed);
    CHECK(open.samples.size() == 64); // singular angles fall between grid points

    const CausticCurve outer = caustic_sample(Complex{1.2, 0.0}, 64);
    CHECK(outer.closed);

    CHECK_FALSE(caustic_sample(Complex{1.0, 0.0}, 64).closed);

    // every sample satisfies the implicit equation at its own scale
    for (const CausticCurve* curve : {&closed, &half, &open, &outer}) {
        for (const CausticSample& s : curve->samples) {
            CHECK(std::abs(caustic_implicit(curve->radiant, s.point)) <=
                  1e-6 * caustic_residual_scale(curve->radiant, s.point));
        }
        CHECK(curve->e2_circle.is_line == (std::abs(2.0 * std::abs(curve->radiant) - 1.0) < 1e-12));
    }

    // samples are ordered by angle
    for (std::size_t i = 1; i < open.samples.size(); ++i)
        CHECK(open.samples[i].phi > open.samples[i - 1].phi);

    CHECK_THROWS_AS(caustic_sample(Complex{0.4, 0.0}, 4), std::invalid_argument);
}

TEST_CASE("off-axis radiant", "[caustic]") {
    const Complex z1 = std::polar(0.8, 0.7);
    const CausticCurve curve = caustic_sample(z1, 96);
    CHECK_FALSE(curve.closed);
    for (const CausticSample& s : curve.samples) {
        CHECK(std::abs(caustic_implicit(z1, s.point)) <=
              1e-6 * caustic_residual_scale(z1, s.point));
    }
    // the rotated axis cusp from the real-axis case
    const Complex expect = std::polar(1.0, 0.7) * Complex{4.0 / 3.0, 0.0};
    CHECK(oracles::close(caustic_point(z1, 0.7), expect, 1e-10));
}
