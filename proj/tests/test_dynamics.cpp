#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ergolab/dynamics.hpp"

using namespace ergolab;

TEST_CASE("wrap_unit lands in [0,1)", "[dynamics]") {
    CHECK(wrap_unit(0.0) == 0.0);
    CHECK(wrap_unit(1.0) == 0.0);
    CHECK(wrap_unit(-0.25) == Catch::Approx(0.75));
    CHECK(wrap_unit(3.75) == Catch::Approx(0.75));
    CHECK(wrap_unit(-3.0) == 0.0);
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        double x = (rng.uniform01() - 0.5) * 100.0;
        double w = wrap_unit(x);
        REQUIRE(w >= 0.0);
        REQUIRE(w < 1.0);
        // same point on the circle
        REQUIRE(std::fabs(std::remainder(x - w, 1.0)) < 1e-9);
    }
}

TEST_CASE("rational rotation numbers are rejected", "[dynamics]") {
    CHECK(near_rational(0.5));
    CHECK(near_rational(0.75));
    CHECK(near_rational(0.1));
    CHECK(near_rational(1.0 / 3.0));
    CHECK(near_rational(0.5 + 1e-14));
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK_FALSE(near_rational(golden));
    CHECK_FALSE(near_rational(std::sqrt(2.0) - 1.0));
    CHECK_FALSE(near_rational(std::numbers::pi - 3.0));

    CHECK_THROWS_AS(Transformation({0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Transformation({0.2}), std::invalid_argument);
    CHECK_THROWS_AS(Transformation({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Transformation({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Transformation({golden, 0.25}), std::invalid_argument);
    CHECK_NOTHROW(Transformation({golden}));
    CHECK_NOTHROW(Transformation({golden, std::sqrt(2.0) - 1.0}));
}

TEST_CASE("golden shift and its inverse cancel", "[dynamics]") {
    Transformation T = Transformation::golden();
    REQUIRE(T.dim() == 1);
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        Point w = random_point(rng, 1);
        Point back = T.apply_inverse(T.apply(w));
        REQUIRE(torus_distance(w, back) < 1e-14);
        Point fwd = T.apply(T.apply_inverse(w));
        REQUIRE(torus_distance(w, fwd) < 1e-14);
    }
    // explicit value
    Point w(0.25);
    Point u = T.apply(w);
    CHECK(u[0] == Catch::Approx(wrap_unit(0.25 + T.alpha(0))).margin(1e-15));
}

TEST_CASE("orbits have the requested shape", "[dynamics]") {
    Transformation T = Transformation::golden();
    OrbitSpec spec;
    spec.start = Point(0.1);
    spec.length = 5;
    auto o = orbit(T, spec);
    REQUIRE(o.size() == 5);
    CHECK(torus_distance(o[0], spec.start) == 0.0);
    for (std::size_t i = 1; i < o.size(); ++i)
        REQUIRE(torus_distance(o[i], T.apply(o[i - 1])) < 1e-15);

    spec.forward = false;
    auto b = orbit(T, spec);
    for (std::size_t i = 1; i < b.size(); ++i)
        REQUIRE(torus_distance(b[i], T.apply_inverse(b[i - 1])) < 1e-15);

    spec.length = 0;
    CHECK_THROWS_AS(orbit(T, spec), std::invalid_argument);
}

TEST_CASE("torus distance is a metric and wraps", "[dynamics]") {
    CHECK(torus_distance(Point(0.99), Point(0.01)) == Catch::Approx(0.02));
    CHECK(torus_distance(Point(0.0), Point(0.5)) == Catch::Approx(0.5));
    CHECK(circle_distance(0.9, 0.1) == Catch::Approx(0.2));

    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        Point a = random_point(rng, 2);
        Point b = random_point(rng, 2);
        Point c = random_point(rng, 2);
        double ab = torus_distance(a, b);
        double ba = torus_distance(b, a);
        REQUIRE(ab == ba);
        REQUIRE(ab >= 0.0);
        REQUIRE(ab <= 0.5 + 1e-15);
        REQUIRE(torus_distance(a, c) <= ab + torus_distance(b, c) + 1e-15);
    }
    CHECK_THROWS_AS(torus_distance(Point(0.1), Point(0.1, 0.2)),
                    std::invalid_argument);
}

TEST_CASE("rotation is an isometry", "[dynamics]") {
    Transformation T({(std::sqrt(5.0) - 1.0) / 2.0, std::sqrt(2.0) - 1.0});
    Rng rng(17);
    for (int i = 0; i < 2000; ++i) {
        Point a = random_point(rng, 2);
        Point b = random_point(rng, 2);
        double before = torus_distance(a, b);
        double after = torus_distance(T.apply(a), T.apply(b));
        REQUIRE(after == Catch::Approx(before).margin(1e-14));
    }
}

TEST_CASE("golden orbit equidistributes", "[dynamics]") {
    Transformation T = Transformation::golden();
    const long long N = 1000000;
    double th = 0.3;
    double al = T.alpha(0);
    long long hits = 0;
    double cos_sum = 0.0;
    for (long long n = 0; n < N; ++n) {
        if (th >= 0.25 && th < 0.5) ++hits;
        cos_sum += std::cos(2.0 * std::numbers::pi * th);
        th += al;
        if (th >= 1.0) th -= 1.0;
    }
    double frac = double(hits) / double(N);
    CHECK(frac == Catch::Approx(0.25).margin(0.002));
    CHECK(std::fabs(cos_sum / double(N)) < 0.01);
}

TEST_CASE("deterministic rng streams", "[dynamics]") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());
    // distinct streams from one base seed
    REQUIRE(split_seed(0, 0) != split_seed(0, 1));
    REQUIRE(split_seed(0, 0) != split_seed(1, 0));
    Rng c(1);
    for (int i = 0; i < 1000; ++i) {
        double u = c.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}
