#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "wavrel/dirichlet.hpp"
#include "wavrel/fields.hpp"
#include "wavrel/numerics.hpp"
#include "wavrel/symplectic.hpp"

using namespace wavrel;
using num::pi;
using num::two_pi;
using testing::disk_domain;
using testing::ellipse_domain;

TEST_CASE("disk orbits have period two") {
    auto disk = disk_domain();
    const auto rec = dirichlet::orbit(disk, {0, 0.3}, 8);
    REQUIRE(rec.period.has_value());
    CHECK(*rec.period == 2);
    // iterates alternate between theta - pi and theta
    CHECK(testing::circ_dist(rec.iterates[0].t, 0.3 - pi, two_pi) < 1e-9);
    CHECK(testing::circ_dist(rec.iterates[1].t, 0.3, two_pi) < 1e-9);
    CHECK(rec.rotation_estimate == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("rotation numbers: half turn on circles, converged on the ellipse") {
    auto disk = disk_domain();
    const auto r1 = dirichlet::rotation_number(disk, 0, 64);
    CHECK(r1.value == doctest::Approx(0.5).epsilon(1e-10));

    auto circ = ellipse_domain(1.0, 1.0);
    const auto r2 = dirichlet::rotation_number(circ, 0, 64);
    CHECK(r2.value == doctest::Approx(0.5).epsilon(1e-10));

    auto ell = ellipse_domain(2.0, 1.0);
    const auto r3 = dirichlet::rotation_number(ell, 0, 100000);
    CHECK(r3.converged);
    CHECK(r3.delta < 1e-4);
    // golden value from the simulation itself (recorded, not paper-sourced)
    CHECK(r3.value == doctest::Approx(0.704833).epsilon(1e-3));
}

TEST_CASE("ellipse orbits do not close quickly and report statistics") {
    auto ell = ellipse_domain(2.0, 1.0);
    const auto rec = dirichlet::orbit(ell, {0, 0.37}, 4000);
    CHECK(!rec.period.has_value());
    CHECK(rec.discrepancy < 0.2);
    CHECK(rec.iterates.size() == 4000);
}

TEST_CASE("existence obstruction vanishes on Dirichlet traces of solutions") {
    auto disk = disk_domain();
    const std::size_t M = 512;

    // phi = cos(theta) is the trace of the solution x: identically unobstructed
    std::vector<std::vector<double>> cos1(1, std::vector<double>(M));
    std::vector<std::vector<double>> cos2(1, std::vector<double>(M));
    for (std::size_t i = 0; i < M; ++i) {
        cos1[0][i] = std::cos(two_pi * i / M);
        cos2[0][i] = std::cos(2.0 * two_pi * i / M);
    }
    const double o1 = dirichlet::existence_obstruction(disk, cos1, {0, 0.3}, 2);
    CHECK(std::abs(o1) < 1e-9);

    // cos(2 theta) is outside the Dirichlet image: the sum is 4 cos(2 theta)
    const double o2 = dirichlet::existence_obstruction(disk, cos2, {0, 0.3}, 2);
    CHECK(o2 == doctest::Approx(4.0 * std::cos(0.6)).epsilon(1e-6));

    // constants cancel pairwise
    std::vector<std::vector<double>> cst(1, std::vector<double>(M, 3.0));
    CHECK(std::abs(dirichlet::existence_obstruction(disk, cst, {0, 1.1}, 2)) < 1e-12);

    // aperiodic points are rejected
    auto ell = ellipse_domain(2.0, 1.0);
    std::vector<std::vector<double>> f(1, std::vector<double>(M, 0.0));
    CHECK_THROWS_AS(dirichlet::existence_obstruction(ell, f, {0, 0.3}, 2), Error);
}

TEST_CASE("L-fields pass the four-point identity at random points") {
    auto disk = disk_domain();
    fields::FieldConfig cfg;
    cfg.M = 512;
    cfg.validate_invariance = false;
    num::Rng rng(71);
    const auto fam_m = symp::invariant_family(disk, -1, 6);
    const auto fam_p = symp::invariant_family(disk, +1, 6);
    for (int rep = 0; rep < 6; ++rep) {
        const std::size_t i = 1 + static_cast<std::size_t>(rng.uniform(0, fam_m.size() - 1.01));
        const std::size_t j = 1 + static_cast<std::size_t>(rng.uniform(0, fam_p.size() - 1.01));
        const auto u = fields::make_L_field(disk, fam_m[i % fam_m.size()],
                                            fam_p[j % fam_p.size()], cfg);
        for (int k = 0; k < 16; ++k) {
            const double p = rng.uniform(0.0, two_pi);
            const double o = dirichlet::existence_obstruction(disk, u.phi, {0, p}, 2);
            CHECK(std::abs(o) < 1e-8);
        }
    }
}

TEST_CASE("kernel field: zero trace, nonzero normal channel, in the relation") {
    auto disk = disk_domain();
    fields::FieldConfig cfg;
    cfg.M = 1024;
    const auto kf = dirichlet::kernel_field(disk, 0, 0.1, 0.4, 2, cfg);
    CHECK(kf.invariance_residual_minus < 1e-7);
    CHECK(kf.invariance_residual_plus < 1e-7);

    double max_phi = 0.0, max_phin = 0.0;
    for (std::size_t i = 0; i < cfg.M; ++i) {
        max_phi = std::max(max_phi, std::abs(kf.field.phi[0][i]));
        max_phin = std::max(max_phin, std::abs(kf.field.phi_n[0][i]));
    }
    CHECK(max_phi == 0.0);
    CHECK(max_phin > 0.1);

    // omega-isotropic against an L-basis
    fields::FieldConfig bcfg;
    bcfg.M = 1024;
    bcfg.validate_invariance = false;
    const auto fam_m = symp::invariant_family(disk, -1, 16);
    const auto fam_p = symp::invariant_family(disk, +1, 16);
    const fields::BoundaryFn zero([](std::size_t, double) { return 0.0; },
                                  [](std::size_t, double) { return 0.0; });
    std::vector<fields::BoundaryField> basis;
    for (const auto& f : fam_m) basis.push_back(fields::make_L_field(disk, f, zero, bcfg));
    for (const auto& g : fam_p) basis.push_back(fields::make_L_field(disk, zero, g, bcfg));
    basis.push_back(kf.field);
    CHECK(symp::isotropy_residual(disk, basis) < 1e-7);

    // its rho image has invariant channels
    const auto pr = fields::rho(disk, kf.field);
    CHECK(fields::form_invariance_residual(disk, -1, pr.alpha) < 1e-7);
    CHECK(fields::form_invariance_residual(disk, +1, pr.beta) < 1e-7);
}

TEST_CASE("kernel field construction fails without periodicity") {
    auto ell = ellipse_domain(2.0, 1.0);
    CHECK_THROWS_AS(dirichlet::kernel_field(ell, 0, 0.1, 0.4, 2), Error);
}

TEST_CASE("orbit statistics survive conformal pushes") {
    auto disk = disk_domain();
    const auto map = symp::compose(symp::conformal_boost(0.4), symp::conformal_scaling(1.5));
    auto pushed = symp::conformal_push(map, disk, testing::exact_linear_trace(disk, 512)).first;
    const auto r = dirichlet::rotation_number(pushed, 0, 256);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-8));
    const auto rec = dirichlet::orbit(pushed, {0, 0.7}, 8);
    REQUIRE(rec.period.has_value());
    CHECK(*rec.period == 2);
}
