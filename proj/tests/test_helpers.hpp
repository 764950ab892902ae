#pragma once

#include <cmath>
#include <string>

#include "wavrel/fields.hpp"
#include "wavrel/geometry.hpp"
#include "wavrel/numerics.hpp"

namespace wavrel::testing {

inline geom::Domain disk_domain() {
    return geom::make_domain(std::string(R"({"metric":"minkowski","curves":[{"kind":"circle","r":1}]})"));
}

inline geom::Domain annulus_domain(double r1 = 1.0, double r2 = 2.0) {
    return geom::make_domain(std::string(R"({"metric":"minkowski","curves":[{"kind":"circle","r":)") +
                             std::to_string(r1) + R"(},{"kind":"circle","r":)" + std::to_string(r2) +
                             R"(}],"outer":1})");
}

inline geom::Domain ellipse_domain(double a, double b) {
    return geom::make_domain(std::string(R"({"metric":"minkowski","curves":[{"kind":"ellipse","a":)") +
                             std::to_string(a) + R"(,"b":)" + std::to_string(b) + R"(}]})");
}

// four-component domain: a large outer circle with three well-separated
// holes, each seeing the outer circle along both null directions and fat
// enough that the global invariant modes stay nondegenerate on them
inline geom::Domain four_component_domain() {
    return geom::make_domain(std::string(R"({"metric":"minkowski","curves":[
        {"kind":"circle","r":4},
        {"kind":"circle","r":1.0,"center":[0.0,2.2]},
        {"kind":"circle","r":1.0,"center":[-1.905,-1.1]},
        {"kind":"circle","r":1.0,"center":[1.905,-1.1]}],"outer":0})"));
}

// gentle star-like fourier blob satisfying assumptions (A)-(C)
inline geom::Domain blob_domain() {
    return geom::make_domain(std::string(R"({"metric":"minkowski","curves":[
        {"kind":"fourier",
         "cx":[0.0, 1.15, 0.0, 0.04, 0.06, 0.0, -0.02],
         "cy":[0.0, 0.0, 0.95, 0.05, -0.04, 0.015, 0.0],
         "T":6.283185307179586}]})"));
}

// plane angle of a boundary point of a centered circle component
inline double angle_of(const geom::Domain& dom, std::size_t comp, double t) {
    const auto p = dom.component(comp).position(t);
    return std::atan2(p.y, p.x);
}

// component parameter of a centered circle at a given plane angle (the
// component may run clockwise, so probe both candidates)
inline double param_of_angle(const geom::Domain& dom, std::size_t comp, double angle) {
    const double T = dom.component(comp).period();
    double best_t = 0.0, best = 1e300;
    for (double cand : {angle, T - angle}) {
        double t = std::fmod(cand, T);
        if (t < 0) t += T;
        const auto p = dom.component(comp).position(t);
        const double r = std::hypot(p.x, p.y);
        const double d = std::hypot(p.x - r * std::cos(angle), p.y - r * std::sin(angle));
        if (d < best) {
            best = d;
            best_t = t;
        }
    }
    return best_t;
}

inline double wrap_pm_pi(double a) {
    a = std::fmod(a + num::pi, num::two_pi);
    if (a < 0) a += num::two_pi;
    return a - num::pi;
}

inline double circ_dist(double a, double b, double T) {
    double d = std::abs(std::fmod(a - b, T));
    if (d < 0) d += T;
    return std::min(d, T - d);
}

// trace of the exact solution phi = sqrt(2) x on the domain boundary, with
// the Euclidean-normal phi_n channel
inline fields::BoundaryField exact_linear_trace(const geom::Domain& dom, std::size_t M) {
    fields::BoundaryField u;
    u.phi.resize(dom.size());
    u.phi_n.resize(dom.size());
    const double s2 = std::sqrt(2.0);
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        u.phi[c].resize(M);
        u.phi_n[c].resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            const double t = T * static_cast<double>(i) / M;
            const auto fr = geom::frame(dom.component(c), t);
            const geom::Vec2 n{fr.tangent_unit.y, -fr.tangent_unit.x};
            u.phi[c][i] = s2 * fr.position.x;
            u.phi_n[c][i] = s2 * n.x; // grad(sqrt2 x) . n
        }
    }
    return u;
}

// random trigonometric field with seeded coefficients
inline fields::BoundaryField random_field(const geom::Domain& dom, std::size_t M, num::Rng& rng,
                                          std::size_t degree = 5) {
    fields::BoundaryField u;
    u.phi.resize(dom.size());
    u.phi_n.resize(dom.size());
    for (std::size_t c = 0; c < dom.size(); ++c) {
        u.phi[c].assign(M, 0.0);
        u.phi_n[c].assign(M, 0.0);
        for (std::size_t k = 0; k <= degree; ++k) {
            const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
            const double an = rng.uniform(-1, 1), bn = rng.uniform(-1, 1);
            for (std::size_t i = 0; i < M; ++i) {
                const double w = num::two_pi * static_cast<double>(k * i) / M;
                u.phi[c][i] += a * std::cos(w) + (k ? b * std::sin(w) : 0.0);
                u.phi_n[c][i] += an * std::cos(w) + (k ? bn * std::sin(w) : 0.0);
            }
        }
    }
    return u;
}

} // namespace wavrel::testing
