#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "alhazen/disk.hpp"
#include "oracles.hpp"

using alhazen::Complex;
using namespace alhazen::disk;

namespace {

std::vector<Complex> unimodular_roots(const PointPair& pair) {
    std::vector<Complex> out;
    for (Complex r : alhazen::poly::poly_roots(pa_quartic(pair)).roots)
        if (std::abs(std::abs(r) - 1.0) <= kUnimodularTol) out.push_back(r);
    return out;
}

} // namespace

TEST_CASE("reflection quartic roots on the circle match the angle sweep", "[disk]") {
    oracles::Rng rng(42001);
    for (int trial = 0; trial < 40; ++trial) {
        const PointPair pair{rng.in_disk(), rng.in_disk()};
        if (std::abs(pair.z1 - pair.z2) < 1e-3) continue;
        const auto angles = oracles::circle_root_angles(pair.s(), pair.p());
        const auto roots = unimodular_roots(pair);
        REQUIRE(roots.size() == angles.size());
        std::vector<Complex> expected;
        for (double th : angles) expected.push_back(std::polar(1.0, th));
        CHECK(oracles::set_distance(roots, expected) < 1e-6);
    }
}

TEST_CASE("discriminant agrees with the quartic discriminant", "[disk]") {
    oracles::Rng rng(42002);
    for (int trial = 0; trial < 40; ++trial) {
        const PointPair pair{rng.in_disk(), rng.in_disk()};
        const double d = discriminant(pair);
        const Complex full = alhazen::poly::quartic_discriminant(pa_quartic(pair));
        CHECK(std::abs(full.imag()) <= 1e-12 * std::max(1.0, std::abs(full)));
        CHECK(std::abs(d - full.real()) <= 1e-9 * std::max(1.0, std::abs(d)));
    }
    CHECK_THROWS_WITH(discriminant(PointPair{Complex{0.0, 0.0}, Complex{0.5, 0.0}}),
                      "discriminant: zero input point");
}

TEST_CASE("discriminant sign decides the root pattern", "[disk]") {
    oracles::Rng rng(42003);
    int negatives = 0, positives = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const PointPair pair{rng.in_disk(), rng.in_disk()};
        if (std::abs(pair.z1 - pair.z2) < 1e-3) continue;
        const RootClassification cls = classify_roots(pair);
        const auto angles = oracles::circle_root_angles(pair.s(), pair.p());
        if (cls.variant == RootVariant::FourSimpleUnimodular) {
            ++negatives;
            CHECK(cls.discriminant_value < 0.0);
            CHECK(angles.size() == 4);
        } else if (cls.variant == RootVariant::TwoUnimodularTwoOff) {
            ++positives;
            CHECK(cls.discriminant_value > 0.0);
            CHECK(angles.size() == 2);
            // the two off-circle roots pair up as w and 1/conj(w)
            std::vector<Complex> off;
            for (Complex r : alhazen::poly::poly_roots(pa_quartic(pair)).roots)
                if (std::abs(std::abs(r) - 1.0) > kUnimodularTol) off.push_back(r);
            REQUIRE(off.size() == 2);
            CHECK(std::abs(off[0] * std::conj(off[1]) - 1.0) < 1e-6);
        }
    }
    // both generic patterns must actually occur in the sample
    CHECK(negatives > 10);
    CHECK(positives > 10);
}

TEST_CASE("one-sided modulus bounds", "[disk]") {
    oracles::Rng rng(42004);
    int two = 0, four = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const PointPair pair{rng.in_disk(), rng.in_disk()};
        if (std::abs(pair.z1 - pair.z2) < 1e-3) continue;
        if (e2(pair) > 1e-6) {
            ++two;
            CHECK(classify_roots(pair).variant == RootVariant::TwoUnimodularTwoOff);
        } else if (e1(pair) < -1e-6) {
            ++four;
            CHECK(classify_roots(pair).variant == RootVariant::FourSimpleUnimodular);
        }
    }
    CHECK(two > 20);
    CHECK(four > 20);
}

TEST_CASE("triple root pattern at the cusp", "[disk]") {
    const PointPair pair{Complex{0.5, 0.0}, Complex{-0.25, 0.0}};
    CHECK(discriminant(pair) == 0.0);
    const RootClassification cls = classify_roots(pair);
    CHECK(cls.variant == RootVariant::MultipleTriplePlusOpposite);

    alhazen::poly::SolveOptions opt;
    opt.cluster_eps = 5e-5;
    const auto rs = alhazen::poly::poly_roots(pa_quartic(pair), opt);
    REQUIRE(rs.roots.size() == 2);
    CHECK(rs.multiplicity_estimates[0] == 3);
    CHECK(rs.multiplicity_estimates[1] == 1);
    // the simple root sits opposite the triple one
    CHECK(std::abs(rs.roots[1] + rs.roots[0]) < 1e-6);
    CHECK(oracles::close(rs.roots[0], Complex{-1.0, 0.0}, 1e-6));
}

TEST_CASE("double root pattern on the critical set", "[disk]") {
    // second point chosen so the quartic picks up a double root at u = i
    const PointPair pair{Complex{0.5, 0.0}, Complex{-1.0 / 3.0, 1.0 / 3.0}};
    const RootClassification cls = classify_roots(pair);
    CHECK(std::abs(cls.discriminant_value) < 1e-12);
    CHECK(cls.variant == RootVariant::MultipleDoublePlusTwoSimple);

    alhazen::poly::SolveOptions opt;
    opt.cluster_eps = 5e-5;
    const auto rs = alhazen::poly::poly_roots(pa_quartic(pair), opt);
    bool found_double = false;
    for (std::size_t i = 0; i < rs.roots.size(); ++i)
        if (rs.multiplicity_estimates[i] == 2 && oracles::close(rs.roots[i], Complex{0.0, 1.0}, 1e-5))
            found_double = true;
    CHECK(found_double);
}

TEST_CASE("reflection points for generic interior pairs", "[disk]") {
    const PointPair pair{Complex{0.37, 0.0}, Complex{-0.37, 0.0}};
    const PASolution sol = pa_points_disk(pair);
    CHECK_FALSE(sol.blocked);
    REQUIRE(sol.reflection_points.size() == 4);
    CHECK(oracles::set_distance(sol.reflection_points,
                                {Complex{1.0, 0.0}, Complex{-1.0, 0.0}, Complex{0.0, 1.0},
                                 Complex{0.0, -1.0}}) < 1e-9);
    CHECK(sol.metric_value == Catch::Approx(0.37).margin(1e-10));

    for (Complex u : sol.reflection_points) {
        CHECK(std::abs(std::abs(u) - 1.0) < 1e-9);
        // incidence angles agree: the reflection law at u
        const Complex a = (pair.z1 - u) / std::abs(pair.z1 - u);
        const Complex b = (pair.z2 - u) / std::abs(pair.z2 - u);
        const Complex n = u; // outward normal of the unit circle
        CHECK(std::abs((std::conj(n) * a).real() - (std::conj(n) * b).real()) < 1e-9);
    }
}

TEST_CASE("center source reduces to the diameter", "[disk]") {
    const Complex z2{0.3, 0.45};
    const PASolution sol = pa_points_disk(PointPair{Complex{0.0, 0.0}, z2});
    const Complex e = z2 / std::abs(z2);
    REQUIRE(sol.reflection_points.size() == 2);
    CHECK(oracles::set_distance(sol.reflection_points, {e, -e}) < 1e-12);
    REQUIRE(sol.all_roots.roots.size() == 3);
    CHECK(sol.metric_value == Catch::Approx(0.3706447424515677).margin(1e-12));

    // same answer with the roles swapped
    const PASolution swapped = pa_points_disk(PointPair{z2, Complex{0.0, 0.0}});
    CHECK(oracles::set_distance(swapped.reflection_points, sol.reflection_points) < 1e-12);
    CHECK(swapped.metric_value == Catch::Approx(sol.metric_value).margin(1e-14));

    CHECK_THROWS_WITH(pa_points_disk(PointPair{z2, z2}), "coincident points");
}

TEST_CASE("sources outside the mirror", "[disk]") {
    const PASolution sol = pa_points_disk(PointPair{Complex{1.1, 0.0}, Complex{1.3, 0.0}});
    CHECK_FALSE(sol.blocked);
    REQUIRE(sol.reflection_points.size() == 2);
    CHECK(oracles::close(sol.reflection_points[0], Complex{-1.0, 0.0}, 1e-9));
    CHECK(oracles::close(sol.reflection_points[1], Complex{1.0, 0.0}, 1e-9));
    CHECK(sol.metric_value == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("segment crossing the mirror blocks the metric", "[disk]") {
    const PASolution sol = pa_points_disk(PointPair{Complex{0.5, 0.0}, Complex{1.5, 0.0}});
    CHECK(sol.blocked);
    CHECK(sol.metric_value == 1.0);
    REQUIRE(sol.reflection_points.size() == 1);
    CHECK(oracles::close(sol.reflection_points[0], Complex{-1.0, 0.0}, 1e-9));
}

TEST_CASE("metric against a dense boundary search", "[disk]") {
    oracles::Rng rng(42005);
    for (int trial = 0; trial < 8; ++trial) {
        const PointPair pair{rng.in_disk(), rng.in_disk()};
        if (std::abs(pair.z1 - pair.z2) < 1e-2) continue;
        const PASolution sol = pa_points_disk(pair);
        REQUIRE_FALSE(sol.blocked);
        const double min_sum = oracles::circle_min_sum(pair.z1, pair.z2);
        CHECK(sol.metric_value ==
              Catch::Approx(std::abs(pair.z1 - pair.z2) / min_sum).epsilon(1e-9));
    }
}

TEST_CASE("rotation, swap and conjugation invariance", "[disk]") {
    oracles::Rng rng(42006);
    for (int trial = 0; trial < 15; ++trial) {
        const PointPair pair{rng.in_disk(), rng.in_disk()};
        if (std::abs(pair.z1 - pair.z2) < 1e-2) continue;
        const PASolution base = pa_points_disk(pair);

        const Complex rot = std::polar(1.0, rng.uniform(0.0, 6.28));
        const PASolution rotated = pa_points_disk(PointPair{rot * pair.z1, rot * pair.z2});
        std::vector<Complex> mapped;
        for (Complex u : base.reflection_points) mapped.push_back(rot * u);
        CHECK(oracles::set_distance(rotated.reflection_points, mapped) < 1e-9);
        CHECK(rotated.metric_value == Catch::Approx(base.metric_value).margin(1e-11));

        const PASolution swapped = pa_points_disk(PointPair{pair.z2, pair.z1});
        CHECK(oracles::set_distance(swapped.reflection_points, base.reflection_points) < 1e-9);
        CHECK(swapped.metric_value == Catch::Approx(base.metric_value).margin(1e-12));

        const PASolution conjugated =
            pa_points_disk(PointPair{std::conj(pair.z1), std::conj(pair.z2)});
        std::vector<Complex> conj_pts;
        for (Complex u : base.reflection_points) conj_pts.push_back(std::conj(u));
        CHECK(oracles::set_distance(conjugated.reflection_points, conj_pts) < 1e-9);
        CHECK(conjugated.metric_value == Catch::Approx(base.metric_value).margin(1e-12));
    }
}

TEST_CASE("real-parameter route matches the quartic route", "[disk]") {
    oracles::Rng rng(42007);
    int compared = 0;
    for (int trial = 0; trial < 60 && compared < 25; ++trial) {
        const PointPair pair{rng.in_disk(), rng.in_disk()};
        const double cross = std::abs((std::conj(pair.z1) * pair.z2).imag());
        if (cross < 1e-3 || std::abs(pair.z1 - pair.z2) < 1e-2) continue;
        ++compared;
        const PASolution a = pa_points_apollonius(pair);
        const PASolution b = pa_points_disk(pair);
        CHECK(oracles::set_distance(a.reflection_points, b.reflection_points) < 1e-7);
        CHECK(a.metric_value == Catch::Approx(b.metric_value).margin(1e-9));
    }
    REQUIRE(compared == 25);
}

TEST_CASE("real-parameter route with equal moduli", "[disk]") {
    oracles::Rng rng(42008);
    for (int trial = 0; trial < 10; ++trial) {
        const double r = rng.uniform(0.2, 0.85);
        const double t1 = rng.uniform(0.0, 6.28), t2 = rng.uniform(0.0, 6.28);
        if (std::abs(std::remainder(t1 - t2, 3.14159265358979323846)) < 0.2) continue;
        const PointPair pair{std::polar(r, t1), std::polar(r, t2)};
        const PASolution a = pa_points_apollonius(pair);
        const PASolution b = pa_points_disk(pair);
        CHECK(oracles::set_distance(a.reflection_points, b.reflection_points) < 1e-7);
        CHECK(a.metric_value == Catch::Approx(b.metric_value).margin(1e-9));
        // the midpoint direction is always one of the reflection points here
        const Complex mid = (pair.z1 + pair.z2) / 2.0;
        bool found = false;
        for (Complex u : a.reflection_points)
            if (std::abs(u - mid / std::abs(mid)) < 1e-7) found = true;
        CHECK(found);
    }
}

TEST_CASE("real-parameter route degeneracies", "[disk]") {
    CHECK_THROWS_WITH(pa_points_apollonius(PointPair{Complex{0.3, 0.0}, Complex{-0.6, 0.0}}),
                      "degenerate: collinear with center");
    CHECK_THROWS_WITH(
        pa_points_apollonius(PointPair{Complex{0.2, 0.4}, Complex{0.1, 0.2}}),
        "degenerate: collinear with center");

    // just above the collinearity cutoff both routes still agree
    const Complex z1{0.4, 0.0};
    const Complex z2 = Complex{-0.55, 0.0} * std::polar(1.0, 1e-5);
    const PASolution a = pa_points_apollonius(PointPair{z1, z2});
    const PASolution b = pa_points_disk(PointPair{z1, z2});
    CHECK(oracles::set_distance(a.reflection_points, b.reflection_points) < 1e-6);
    CHECK(a.metric_value == Catch::Approx(b.metric_value).margin(1e-8));
}

TEST_CASE("real-parameter quartic coefficients", "[disk]") {
    // t parametrizes the segment; each root in (0,1) must solve the original
    // reflection condition after projection to the circle
    oracles::Rng rng(42009);
    for (int trial = 0; trial < 20; ++trial) {
        const PointPair pair{rng.in_disk(), rng.in_disk()};
        if (std::abs((std::conj(pair.z1) * pair.z2).imag()) < 1e-3) continue;
        const auto tq = apollonius_quartic(pair);
        for (const Complex& c : tq) CHECK(c.imag() == 0.0);
        const auto rs = alhazen::poly::poly_roots(tq);
        const auto quartic = pa_quartic(pair);
        for (Complex t : rs.roots) {
            if (std::abs(t.imag()) > 1e-9) continue;
            if (!(t.real() > 1e-6 && t.real() < 1.0 - 1e-6)) continue;
            const Complex v = t.real() * pair.z2 + (1.0 - t.real()) * pair.z1;
            if (std::abs(v) < 1e-9) continue;
            const double r_plus = alhazen::poly::poly_residual(quartic, v / std::abs(v));
            const double r_minus = alhazen::poly::poly_residual(quartic, -v / std::abs(v));
            CHECK(std::min(r_plus, r_minus) < 1e-6);
        }
    }
}
