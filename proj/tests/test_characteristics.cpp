#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "wavrel/characteristics.hpp"
#include "wavrel/numerics.hpp"

using namespace wavrel;
using chars::BoundaryPoint;
using num::pi;
using num::two_pi;
using testing::angle_of;
using testing::annulus_domain;
using testing::circ_dist;
using testing::disk_domain;
using testing::param_of_angle;
using testing::wrap_pm_pi;

TEST_CASE("disk chords reproduce the reflection involutions") {
    auto disk = disk_domain();
    // E_-: theta <-> pi/2 - theta
    const auto res = chars::trace_null(disk, {0, 0.0}, -1);
    REQUIRE(res.outcome == chars::HitOutcome::Hit);
    CHECK(angle_of(disk, 0, res.target.t) == doctest::Approx(0.5 * pi).epsilon(1e-12));

    for (double th : {0.3, 1.1, 2.9, -0.8}) {
        const double t = param_of_angle(disk, 0, th);
        const auto m = chars::trace_null(disk, {0, t}, -1);
        CHECK(wrap_pm_pi(angle_of(disk, 0, m.target.t) - (0.5 * pi - th)) ==
              doctest::Approx(0.0).epsilon(1e-10));
        const auto p = chars::trace_null(disk, {0, t}, +1);
        CHECK(wrap_pm_pi(angle_of(disk, 0, p.target.t) - (-0.5 * pi - th)) ==
              doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("tracing from a light point reports the tangent ray") {
    auto disk = disk_domain();
    const double t = param_of_angle(disk, 0, 0.25 * pi);
    CHECK_THROWS_AS(chars::trace_null(disk, {0, t}, -1), Error);
}

TEST_CASE("involution tables are involutive and orientation reversing") {
    auto disk = disk_domain();
    for (int sign : {-1, +1}) {
        const auto map = chars::involution_map(disk, sign, 256);
        num::Rng rng(7);
        for (int rep = 0; rep < 64; ++rep) {
            const double t = rng.uniform(0.0, two_pi);
            if (map.near_exceptional({0, t}, 1e-4)) continue;
            const auto q = map.apply({0, t});
            const auto back = map.apply(q);
            CHECK(circ_dist(back.t, t, two_pi) < 1e-10 * two_pi * 10);
        }
        // locally decreasing in the domain-oriented parameter
        const double t0 = param_of_angle(disk, 0, 0.3);
        CHECK(map.derivative({0, t0}) < 0.0);
    }
}

TEST_CASE("annulus involution matches the arccos closed form on the inner circle") {
    auto ann = annulus_domain(1.0, 2.0);
    for (int sign : {-1, +1}) {
        for (double th : {0.0, 0.5, 1.7, 3.0, -1.2, -2.6}) {
            const double t = param_of_angle(ann, 0, th);
            const auto res = chars::trace_null(ann, {0, t}, sign);
            REQUIRE(res.outcome == chars::HitOutcome::Hit);
            REQUIRE(res.target.component == 1);
            const auto oracle = chars::annulus_oracle(1.0, 2.0, sign, {false, th});
            CHECK(oracle.outer);
            CHECK(wrap_pm_pi(angle_of(ann, 1, res.target.t) - oracle.angle) ==
                  doctest::Approx(0.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("annulus outer fold arcs follow the reflection formula") {
    auto ann = annulus_domain(1.0, 2.0);
    const double theta0 = std::acos(0.5);
    // E_+ on the arc around -pi/4 (the stated fold arcs)
    for (double off : {-0.8 * theta0, -0.3 * theta0, 0.4 * theta0, 0.9 * theta0}) {
        const double th = -0.25 * pi + off;
        const double t = param_of_angle(ann, 1, th);
        const auto res = chars::trace_null(ann, {1, t}, +1);
        REQUIRE(res.target.component == 1);
        CHECK(wrap_pm_pi(angle_of(ann, 1, res.target.t) - (-0.5 * pi - th)) ==
              doctest::Approx(0.0).epsilon(1e-9));
    }
    // outside the arcs the oracle switches to the inner branch
    const auto q = chars::annulus_oracle(1.0, 2.0, +1, {true, -0.25 * pi + 1.4 * theta0});
    CHECK(!q.outer);
}

TEST_CASE("equivalence classes on the annulus have orders 1, 2 and 3") {
    auto ann = annulus_domain(1.0, 2.0);
    const double theta0 = std::acos(0.5);

    // order 1: the outer light point (-pi/4)^out under E_+
    const double t1 = param_of_angle(ann, 1, -0.25 * pi);
    const auto c1 = chars::equivalence_class(ann, +1, {1, t1});
    CHECK(c1.size() == 1);

    // order 3: the inner light point (-pi/4)^in under E_+ with partners at
    // -pi/4 +- theta0 on the outer circle (theta0 = arccos(1/2) = pi/3)
    const double t3 = param_of_angle(ann, 0, -0.25 * pi);
    const auto c3 = chars::equivalence_class(ann, +1, {0, t3});
    REQUIRE(c3.size() == 3);
    int outer_hits = 0;
    for (const auto& q3 : c3) {
        if (q3.component == 1) {
            ++outer_hits;
            const double a = angle_of(ann, 1, q3.t);
            const bool match = std::abs(wrap_pm_pi(a - (-0.25 * pi - theta0))) < 1e-8 ||
                               std::abs(wrap_pm_pi(a - (-0.25 * pi + theta0))) < 1e-8;
            CHECK(match);
        }
    }
    CHECK(outer_hits == 2);
    CHECK(theta0 == doctest::Approx(pi / 3.0));

    // order 2: generic points
    const auto c2 = chars::equivalence_class(ann, -1, {0, param_of_angle(ann, 0, 0.4)});
    CHECK(c2.size() == 2);
}

TEST_CASE("disk composed map is the half turn") {
    auto disk = disk_domain();
    for (double th : {0.3, 1.9, -2.0}) {
        const double t = param_of_angle(disk, 0, th);
        const auto m = chars::trace_null(disk, {0, t}, -1).target;
        const auto p = chars::trace_null(disk, m, +1).target;
        CHECK(wrap_pm_pi(angle_of(disk, 0, p.t) - (th - pi)) ==
              doctest::Approx(0.0).epsilon(1e-9));
        // (E+E-)^2 = id
        const auto m2 = chars::trace_null(disk, p, -1).target;
        const auto p2 = chars::trace_null(disk, m2, +1).target;
        CHECK(wrap_pm_pi(angle_of(disk, 0, p2.t) - th) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("closed-form oracles agree with the tracer on dense grids") {
    auto disk = disk_domain();
    auto ann = annulus_domain(1.0, 2.0);
    for (int sign : {-1, +1}) {
        double worst_disk = 0.0, worst_ann = 0.0;
        for (int i = 0; i < 512; ++i) {
            const double th = two_pi * (i + 0.5) / 512.0;
            {
                const double t = param_of_angle(disk, 0, th);
                const auto res = chars::trace_null(disk, {0, t}, sign);
                const double target = chars::disk_oracle(sign, th);
                worst_disk = std::max(
                    worst_disk, std::abs(wrap_pm_pi(angle_of(disk, 0, res.target.t) - target)));
            }
            {
                const double t = param_of_angle(ann, 0, th);
                const auto res = chars::trace_null(ann, {0, t}, sign);
                const auto oracle = chars::annulus_oracle(1.0, 2.0, sign, {false, th});
                worst_ann = std::max(worst_ann, std::abs(wrap_pm_pi(angle_of(ann, 1, res.target.t) -
                                                                    oracle.angle)));
            }
        }
        CHECK(worst_disk < 1e-8);
        CHECK(worst_ann < 1e-8);
    }
}

TEST_CASE("generic bracketing tracer agrees with the analytic disk path") {
    // force the generic path by using a fourier parametrization of the circle
    auto dom = geom::make_domain(std::string(
        R"({"metric":"minkowski","curves":[{"kind":"fourier","cx":[0,1,0],"cy":[0,0,1],"T":6.283185307179586}]})"));
    for (double th : {0.4, 1.3, 2.8}) {
        const auto res = chars::trace_null(dom, {0, th}, -1);
        CHECK(wrap_pm_pi(angle_of(dom, 0, res.target.t) - (0.5 * pi - th)) ==
              doctest::Approx(0.0).epsilon(1e-8));
    }
}

TEST_CASE("misner tracing: vertical hits and spiral asymptotics") {
    auto dom = geom::make_domain(std::string(R"({"metric":"misner"})"));
    const auto up = chars::trace_null(dom, {0, 1.2}, +1);
    CHECK(up.outcome == chars::HitOutcome::Hit);
    CHECK(up.target.component == 1);
    CHECK(up.target.t == doctest::Approx(1.2));

    for (std::size_t comp : {std::size_t{0}, std::size_t{1}}) {
        const auto res = chars::trace_null(dom, {comp, 0.5}, -1);
        CHECK(res.outcome == chars::HitOutcome::Asymptotic);
        CHECK(res.path.size() > 10);
        // the spiral approaches the null cycle y = 0
        CHECK(std::abs(res.path.back().y) < 1e-6);
    }

    CHECK_THROWS_AS(chars::involution_map(dom, -1, 64), Error);
    const auto map = chars::involution_map(dom, +1, 64);
    CHECK(map.table()[0][5].target.component == 1);
}

TEST_CASE("involution map exposes the exceptional set") {
    auto ann = annulus_domain(1.0, 2.0);
    const auto map = chars::involution_map(ann, -1, 512);
    // two order-3 classes contribute 3 points each, plus two order-1 points
    CHECK(map.exceptional().size() == 8);
}
