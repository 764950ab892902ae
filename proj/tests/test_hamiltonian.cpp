#include <doctest.h>

#include <cmath>

#include "wavrel/hamiltonian.hpp"
#include "wavrel/numerics.hpp"

using namespace wavrel;
using ham::CircleField;
using num::pi;
using num::two_pi;

namespace {

CircleField from_fn(double (*phi)(double), double (*phin)(double), std::size_t M = 512) {
    CircleField u;
    u.phi.resize(M);
    u.phi_n.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double t = two_pi * static_cast<double>(i) / M;
        u.phi[i] = phi(t);
        u.phi_n[i] = phin(t);
    }
    return u;
}

double zero_fn(double) { return 0.0; }

// trace of the exact solution sqrt(2) x on the circle of radius e^xi, in the
// radial normalization phi_n = d_xi phi
CircleField exact_trace(double xi, std::size_t M = 512) {
    CircleField u;
    u.phi.resize(M);
    u.phi_n.resize(M);
    const double r = std::exp(xi);
    for (std::size_t i = 0; i < M; ++i) {
        const double t = two_pi * static_cast<double>(i) / M;
        u.phi[i] = std::sqrt(2.0) * r * std::cos(t);
        u.phi_n[i] = std::sqrt(2.0) * r * std::cos(t);
    }
    return u;
}

} // namespace

TEST_CASE("hamiltonian quadrature identities") {
    CHECK(std::abs(ham::hamiltonian_H(from_fn([](double) { return 4.0; }, zero_fn))) < 1e-12);
    CHECK(ham::hamiltonian_H(from_fn(zero_fn, [](double t) { return std::cos(t); })) ==
          doctest::Approx(0.25 * pi).epsilon(1e-12));
    CHECK(ham::hamiltonian_H(from_fn([](double t) { return std::cos(t); }, zero_fn)) ==
          doctest::Approx(-0.25 * pi).epsilon(1e-12));
}

TEST_CASE("hamiltonian vector field on simple members") {
    // (0, c) -> (c, 2c)
    const auto v = ham::ham_vector(from_fn(zero_fn, [](double) { return 1.5; }));
    for (std::size_t i = 0; i < v.grid(); ++i) {
        CHECK(v.phi[i] == doctest::Approx(1.5));
        CHECK(v.phi_n[i] == doctest::Approx(3.0).epsilon(1e-8));
    }

    // (sin, sin) is the trace of the solution y: a fixed point of the field
    const auto w = ham::ham_vector(from_fn([](double t) { return std::sin(t); },
                                           [](double t) { return std::sin(t); }));
    for (std::size_t i = 0; i < w.grid(); ++i) {
        const double t = two_pi * static_cast<double>(i) / w.grid();
        CHECK(w.phi[i] == doctest::Approx(std::sin(t)).epsilon(1e-9));
        CHECK(w.phi_n[i] == doctest::Approx(std::sin(t)).epsilon(1e-7));
    }

    // (cos, 0) violates C0 at the light angles
    CHECK_THROWS_AS(ham::ham_vector(from_fn([](double t) { return std::cos(t); }, zero_fn)),
                    Error);
}

TEST_CASE("C0 residuals single out the light angles") {
    const auto res = ham::c0_residuals(from_fn([](double t) { return std::cos(t); }, zero_fn));
    // |d(phi_n) - d(phi)| = |sin t| at the four light angles: all sqrt(2)/2
    for (double r : res) CHECK(r == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("constraint chain: exact solutions descend, C0 violators stop") {
    const auto diag = ham::constraint_chain(exact_trace(0.0), 6);
    CHECK(diag.deepest_pass == 7); // levels 0..6 all pass

    const auto diag_y = ham::constraint_chain(from_fn([](double t) { return std::sin(t); },
                                                      [](double t) { return std::sin(t); }),
                                              6);
    CHECK(diag_y.deepest_pass == 7);

    const auto diag_bad = ham::constraint_chain(from_fn([](double t) { return std::cos(t); },
                                                        zero_fn),
                                                4);
    CHECK(diag_bad.deepest_pass == 0);
    CHECK(!diag_bad.levels[0].pass);

    // (0, cos 4t) has exactly E_--invariant alpha, so the whole chain passes
    const auto diag_c4 = ham::constraint_chain(from_fn(zero_fn, [](double t) {
                                                   return std::cos(4.0 * t);
                                               }),
                                               6);
    CHECK(diag_c4.deepest_pass == 7);

    // (sin 3t, sin 3t) is in C0 (equal channels) but the field pushes it out:
    // d(phi_n) + d^3(phi_n) = -24 cos(3t) at the light angles
    const auto diag_s3 = ham::constraint_chain(from_fn([](double t) { return std::sin(3.0 * t); },
                                                       [](double t) { return std::sin(3.0 * t); }),
                                               6);
    CHECK(diag_s3.deepest_pass == 1);
}

TEST_CASE("C(-xi) membership residuals") {
    const auto good = ham::c_xi_membership(exact_trace(0.0), std::log(2.0));
    CHECK(good.alpha_residual < 1e-8);
    CHECK(good.beta_residual < 1e-8);
    CHECK(good.theta0 == doctest::Approx(std::acos(0.5)));

    const auto bad = ham::c_xi_membership(from_fn([](double t) { return std::cos(2.0 * t); },
                                                  zero_fn),
                                          std::log(2.0));
    CHECK(std::max(bad.alpha_residual, bad.beta_residual) > 1e-2);

    // xi -> 0+: arcs shrink; smooth traces keep tiny residuals
    const auto lim = ham::c_xi_membership(exact_trace(0.0), 1e-4);
    CHECK(lim.alpha_residual < 1e-8);
    CHECK(lim.beta_residual < 1e-8);
}

TEST_CASE("reduced flow maps the linear solution to its inner trace") {
    const double xi = std::log(2.0);
    const auto inner = ham::reduced_flow_neg(exact_trace(0.0), xi);
    const auto expect = exact_trace(-xi);
    double worst = 0.0;
    for (std::size_t i = 0; i < inner.grid(); ++i) {
        worst = std::max(worst, std::abs(inner.phi[i] - expect.phi[i]));
        worst = std::max(worst, std::abs(inner.phi_n[i] - expect.phi_n[i]));
    }
    CHECK(worst < 1e-6);

    // constants are fixed points of the flow
    const auto cst = ham::reduced_flow_neg(from_fn([](double) { return 2.5; }, zero_fn), 0.7);
    for (std::size_t i = 0; i < cst.grid(); ++i) {
        CHECK(cst.phi[i] == doctest::Approx(2.5).epsilon(1e-10));
        CHECK(std::abs(cst.phi_n[i]) < 1e-9);
    }
}

TEST_CASE("flow pullback preserves the circle pairing") {
    const double xi = 0.4;
    // two independent members of C(-xi): traces of sqrt2 x and of y
    const auto u = exact_trace(0.0);
    const auto w = from_fn([](double t) { return std::sin(t); },
                           [](double t) { return std::sin(t); });
    const auto fu = ham::reduced_flow_neg(u, xi);
    const auto fw = ham::reduced_flow_neg(w, xi);
    const double before = ham::circle_omega(u, w);
    const double after = ham::circle_omega(fu, fw);
    CHECK(after == doctest::Approx(before).epsilon(1e-7));
}

TEST_CASE("flow consistency with the vector field as xi -> 0") {
    const auto u = exact_trace(0.0);
    const auto hu = ham::ham_vector(u);
    for (double xi : {1e-2, 5e-3}) {
        const auto fu = ham::reduced_flow_neg(u, xi);
        double worst = 0.0;
        for (std::size_t i = 0; i < u.grid(); ++i) {
            worst = std::max(worst, std::abs((u.phi[i] - fu.phi[i]) / xi - hu.phi[i]));
        }
        // first-order quotient: O(xi) error relative to the field scale
        CHECK(worst < 3.0 * xi);
    }
    // Richardson across the two step sizes
    const auto f1 = ham::reduced_flow_neg(u, 1e-2);
    const auto f2 = ham::reduced_flow_neg(u, 5e-3);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.grid(); ++i) {
        const double d1 = (u.phi[i] - f1.phi[i]) / 1e-2;
        const double d2 = (u.phi[i] - f2.phi[i]) / 5e-3;
        worst = std::max(worst, std::abs(2.0 * d2 - d1 - hu.phi[i]));
    }
    CHECK(worst < 1e-3 * std::sqrt(2.0));
}

TEST_CASE("flow composition law through the intermediate circle") {
    const auto u = exact_trace(0.0);
    CHECK(ham::flow_composition_residual(u, 0.3, 0.4) < 1e-7);

    // xi' = 0 degenerates to the identity composition
    const auto direct = ham::reduced_flow_neg(u, 0.3);
    const auto redone = ham::reduced_flow_neg(direct, 1e-9);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.grid(); ++i) {
        worst = std::max(worst, std::abs(direct.phi[i] - redone.phi[i]));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("kernel basis of C(-xi)^perp descends through H and the flow") {
    const double xi = std::log(2.0);
    const auto basis = ham::c_xi_kernel_basis(xi, 2, 512);
    REQUIRE(basis.size() == 8);
    const auto u = exact_trace(0.0);

    for (const auto& v : basis) {
        // H descends: H(u + v) = H(u)
        CircleField sum = u;
        for (std::size_t i = 0; i < sum.grid(); ++i) {
            sum.phi[i] += v.phi[i];
            sum.phi_n[i] += v.phi_n[i];
        }
        CHECK(std::abs(ham::hamiltonian_H(sum) - ham::hamiltonian_H(u)) < 1e-7);

        // kernel members are in C(-xi) and flow to zero
        const auto m = ham::c_xi_membership(v, xi);
        CHECK(std::max(m.alpha_residual, m.beta_residual) < 1e-7);
        const auto img = ham::reduced_flow_neg(v, xi);
        double sup = 0.0;
        for (std::size_t i = 0; i < img.grid(); ++i) {
            sup = std::max({sup, std::abs(img.phi[i]), std::abs(img.phi_n[i])});
        }
        CHECK(sup < 1e-6);
    }
}

TEST_CASE("vector field acts on the characteristic forms by the cotangent law") {
    const auto u = exact_trace(0.0);
    const auto hu = ham::ham_vector(u);
    const auto fu = ham::circle_forms(u);
    const auto fhu = ham::circle_forms(hu);
    num::TrigInterp ia(fu.alpha, two_pi), ib(fu.beta, two_pi);
    num::TrigInterp iha(fhu.alpha, two_pi), ihb(fhu.beta, two_pi);
    auto cot = [](double x) { return 1.0 / std::tan(x); };
    const double h = 1e-5;
    for (int k = 0; k < 64; ++k) {
        const double t = two_pi * (k + 0.5) / 64.0;
        double dist = two_pi;
        for (double a : ham::light_angles) {
            dist = std::min(dist, std::abs(t - a));
        }
        if (dist < 0.3) continue; // compare away from the light angles
        const double da =
            (cot(t + h - 0.25 * pi) * ia(t + h) - cot(t - h - 0.25 * pi) * ia(t - h)) / (2.0 * h);
        CHECK(iha(t) == doctest::Approx(-da).epsilon(1e-5));
        const double db =
            (cot(t + h + 0.25 * pi) * ib(t + h) - cot(t - h + 0.25 * pi) * ib(t - h)) / (2.0 * h);
        CHECK(ihb(t) == doctest::Approx(-db).epsilon(1e-5));
    }
}
