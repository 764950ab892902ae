#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "wavrel/geometry.hpp"
#include "wavrel/numerics.hpp"

using namespace wavrel;
using testing::annulus_domain;
using testing::disk_domain;

TEST_CASE("make_domain builds the canonical primitives") {
    auto disk = disk_domain();
    CHECK(disk.size() == 1);
    CHECK(disk.contains({0.0, 0.0}));
    CHECK(!disk.contains({1.5, 0.0}));

    auto ann = annulus_domain();
    CHECK(ann.size() == 2);
    CHECK(ann.outer_index() == 1);
    CHECK(ann.component(0).reversed);  // hole runs clockwise
    CHECK(!ann.component(1).reversed); // outer counterclockwise
    CHECK(ann.contains({1.5, 0.0}));
    CHECK(!ann.contains({0.0, 0.0}));
}

TEST_CASE("non-Lorentzian conformal factor is rejected") {
    CHECK_THROWS_AS(
        geom::make_domain(std::string(
            R"({"metric":{"conformal":{"poly":[[-1.0]]}},"curves":[{"kind":"circle","r":1}]})")),
        GeometryError);
    // positive factor passes
    auto dom = geom::make_domain(std::string(
        R"({"metric":{"conformal":{"poly":[[2.0,0.1],[0.0,0.05]]}},"curves":[{"kind":"circle","r":1}]})"));
    CHECK(dom.metric().kind == geom::MetricKind::Conformal);
}

TEST_CASE("unknown curve kind is rejected") {
    CHECK_THROWS_AS(geom::make_domain(std::string(
                        R"({"metric":"minkowski","curves":[{"kind":"heptagon","r":1}]})")),
                    GeometryError);
}

TEST_CASE("frame on the unit circle") {
    auto disk = disk_domain();
    const auto f = geom::frame(disk.component(0), 0.25 * num::pi);
    CHECK(f.theta == doctest::Approx(0.25 * num::pi).epsilon(1e-13));
    CHECK(f.v == doctest::Approx(1.0));
    CHECK(f.kappa == doctest::Approx(1.0));
    const auto f0 = geom::frame(disk.component(0), 0.0);
    CHECK(f0.theta == doctest::Approx(0.0));
    CHECK(f0.v == doctest::Approx(1.0));
}

TEST_CASE("ellipse frame matches the closed-form curvature") {
    auto dom = testing::ellipse_domain(2.0, 1.0);
    const auto f = geom::frame(dom.component(0), 0.0);
    CHECK(f.v == doctest::Approx(1.0));
    // kappa = a b / (a^2 sin^2 t + b^2 cos^2 t)^{3/2} at t = 0
    CHECK(f.kappa == doctest::Approx(2.0));
    const double t = 0.9;
    const auto g = geom::frame(dom.component(0), t);
    const double den = std::pow(4.0 * std::sin(t) * std::sin(t) + std::cos(t) * std::cos(t), 1.5);
    CHECK(g.kappa == doctest::Approx(2.0 / den).epsilon(1e-12));
}

TEST_CASE("light points of the disk and the annulus") {
    auto disk = disk_domain();
    auto lps = geom::light_points(disk);
    REQUIRE(lps.size() == 4);
    int minus = 0, plus = 0;
    for (const auto& lp : lps) {
        const double a = testing::angle_of(disk, 0, lp.t);
        if (lp.sign < 0) {
            ++minus;
            const bool ok = testing::circ_dist(a, 0.25 * num::pi, num::two_pi) < 1e-10 ||
                            testing::circ_dist(a, -0.75 * num::pi, num::two_pi) < 1e-10;
            CHECK(ok);
        } else {
            ++plus;
            const bool ok = testing::circ_dist(a, -0.25 * num::pi, num::two_pi) < 1e-10 ||
                            testing::circ_dist(a, 0.75 * num::pi, num::two_pi) < 1e-10;
            CHECK(ok);
        }
        CHECK(std::abs(std::cos(2.0 * geom::frame(disk.component(0), lp.t).theta)) < 1e-10);
        CHECK(std::abs(lp.kappa) > 1e-6);
    }
    CHECK(minus == 2);
    CHECK(plus == 2);

    auto ann = annulus_domain();
    auto alps = geom::light_points(ann);
    CHECK(alps.size() == 8);
    std::size_t inner = 0;
    for (const auto& lp : alps) {
        if (lp.component == 0) ++inner;
    }
    CHECK(inner == 4);
}

TEST_CASE("light point set is stable under grid refinement") {
    auto blob = testing::blob_domain();
    geom::Tolerances t1, t2;
    t1.root_grid = 2048;
    t2.root_grid = 4096;
    auto a = geom::light_points(blob, t1);
    auto b = geom::light_points(blob, t2);
    REQUIRE(a.size() == b.size());
    const double T = blob.component(0).period();
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(testing::circ_dist(a[i].t, b[i].t, T) < 1e-11 * T * 10.0);
        CHECK(a[i].sign == b[i].sign);
    }
}

TEST_CASE("a diamond boundary violates assumption B") {
    auto dom = geom::make_domain(std::string(
        R"({"metric":"minkowski","curves":[{"kind":"diamond","sp":[0,1],"sm":[0,1]}]})"));
    CHECK_THROWS_AS(geom::light_points(dom), AssumptionBViolation);
}

TEST_CASE("boundary data on the disk matches the closed form") {
    auto disk = disk_domain();
    for (double t : {0.0, 0.4, 2.2, 4.4}) {
        const auto bd = geom::boundary_data(disk, 0, t);
        CHECK(bd.gamma == doctest::Approx(std::cos(2.0 * t)).epsilon(1e-12));
        CHECK(bd.u_coef == doctest::Approx(-std::sin(2.0 * t)).epsilon(1e-12));
        CHECK(bd.mu_dens == doctest::Approx(1.0).epsilon(1e-12));
    }
    // light point: Gamma vanishes
    CHECK(geom::boundary_data(disk, 0, 0.25 * num::pi).gamma == doctest::Approx(0.0));
}

TEST_CASE("boundary data transforms under normal rescaling") {
    auto disk = disk_domain();
    const double t = 0.7;
    const auto fr = geom::frame(disk.component(0), t);
    const geom::Vec2 n{fr.tangent_unit.y, -fr.tangent_unit.x};
    const auto base = geom::boundary_data(disk, 0, t);
    const auto scaled = geom::boundary_data(disk, 0, t, geom::Vec2{2.0 * n.x, 2.0 * n.y});
    // (Gamma', u', mu') = (a^-2 Gamma, a^-1 u, a mu) with a = 2
    CHECK(scaled.gamma == doctest::Approx(base.gamma / 4.0).epsilon(1e-12));
    CHECK(scaled.u_coef == doctest::Approx(base.u_coef / 2.0).epsilon(1e-12));
    CHECK(scaled.mu_dens == doctest::Approx(2.0 * base.mu_dens).epsilon(1e-12));
    // tangential shift w: the defining formulas give u' = u/a - (Gamma/a^2) w,
    // consistent with the phase-space map (phi, phi_n) -> (phi, a phi_n + w(phi))
    const geom::Vec2 shifted{2.0 * n.x + 0.5 * fr.tangent_unit.x,
                             2.0 * n.y + 0.5 * fr.tangent_unit.y};
    const auto mixed = geom::boundary_data(disk, 0, t, shifted);
    CHECK(mixed.gamma == doctest::Approx(base.gamma / 4.0).epsilon(1e-12));
    CHECK(mixed.mu_dens == doctest::Approx(2.0 * base.mu_dens).epsilon(1e-12));
    CHECK(mixed.u_coef ==
          doctest::Approx(base.u_coef / 2.0 - base.gamma * 0.5 / 4.0).epsilon(1e-10));
}

TEST_CASE("tangent custom field is rejected") {
    auto disk = disk_domain();
    const auto fr = geom::frame(disk.component(0), 1.0);
    CHECK_THROWS_AS(geom::boundary_data(disk, 0, 1.0, fr.tangent_unit), GeometryError);
}

TEST_CASE("theta and v are reparametrization covariant") {
    // doubling the sampling density changes nothing: frames are pointwise
    auto blob = testing::blob_domain();
    const double T = blob.component(0).period();
    for (int i = 0; i < 16; ++i) {
        const double t = T * i / 16.0;
        const auto a = geom::frame(blob.component(0), t);
        const auto b = geom::frame(blob.component(0), t + 1e-12);
        CHECK(std::abs(a.theta - b.theta) < 1e-10);
        CHECK(std::abs(a.v - b.v) < 1e-10);
    }
}

TEST_CASE("domain hash is stable and spec-sensitive") {
    auto d1 = disk_domain();
    auto d2 = disk_domain();
    CHECK(geom::domain_hash(d1) == geom::domain_hash(d2));
    auto ann = annulus_domain();
    CHECK(geom::domain_hash(d1) != geom::domain_hash(ann));
}

TEST_CASE("outer component is inferred from the largest area when omitted") {
    auto dom = geom::make_domain(std::string(
        R"({"metric":"minkowski","curves":[{"kind":"circle","r":1},{"kind":"circle","r":2}]})"));
    CHECK(dom.outer_index() == 1);
    CHECK(dom.component(0).reversed);
}

TEST_CASE("four-component boundary carries sixteen light points") {
    auto four = testing::four_component_domain();
    const auto lps = geom::light_points(four);
    CHECK(lps.size() == 16);
    std::size_t per_comp[4] = {0, 0, 0, 0};
    int minus = 0;
    for (const auto& lp : lps) {
        ++per_comp[lp.component];
        if (lp.sign < 0) ++minus;
    }
    for (auto n : per_comp) CHECK(n == 4);
    CHECK(minus == 8);
}

TEST_CASE("self-intersecting curves are rejected") {
    // a figure-eight-like fourier curve crosses itself on the sampling grid
    CHECK_THROWS_AS(geom::make_domain(std::string(
                        R"({"metric":"minkowski","curves":[
                            {"kind":"fourier","cx":[0,1,0],"cy":[0,0,0,0,0.9],"T":6.283185307179586}]})")),
                    GeometryError);
}
