#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "wavrel/geometry.hpp"

namespace wavrel::diamond {

// Boundary field on the light-like diamond [sp0,sp1] x [sm0,sm1] in
// characteristic coordinates: four edge functions on uniform grids, sharing
// the corner values a=(sp0,sm0), b=(sp1,sm0), c=(sp1,sm1), d=(sp0,sm1).
struct DiamondField {
    double sp0 = 0.0, sp1 = 1.0, sm0 = 0.0, sm1 = 1.0;
    std::vector<double> ab, dc; // functions of sigma+ on [sp0, sp1]
    std::vector<double> ad, bc; // functions of sigma- on [sm0, sm1]

    double at_a() const { return ab.front(); }
    double at_b() const { return ab.back(); }
    double at_c() const { return bc.back(); }
    double at_d() const { return dc.front(); }
    std::size_t grid() const { return ab.size(); }
};

using EdgeFn = std::function<double(double)>;

// Edge restrictions of f(sigma+) + g(sigma-).
DiamondField diamond_L(const EdgeFn& f, const EdgeFn& g, double sp0, double sp1, double sm0,
                       double sm1, std::size_t grid = 257);

// Sampled variant for files/tests.
DiamondField make_field(std::vector<double> ab, std::vector<double> dc, std::vector<double> ad,
                        std::vector<double> bc, double sp0, double sp1, double sm0, double sm1);

// Presymplectic pairing 2 oint eps dphi psi + 2(phi_a psi_a - phi_b psi_b +
// phi_c psi_c - phi_d psi_d); eps = +1 on the sigma+-parallel edges.
double diamond_omega(const DiamondField& u, const DiamondField& w);

// Hamilton-Jacobi action of an evolution-relation element: the vertex
// formula, cross-checked against the boundary quadrature (1/2) oint eps phi dphi.
double hj_action(const DiamondField& u, double membership_tol = 1e-10);

// Coisotropy test: either the field satisfies ab - dc = const, ad - bc = const
// (then it lies in L with the reconstructed generators) or a witness in L
// with |omega(witness, w)| > threshold is produced.
struct PerpCertificate {
    bool in_L = false;
    std::vector<double> f_rec, g_rec; // generators when in_L
    double deviation = 0.0;           // max deviation from constancy
    double witness_omega = 0.0;       // pairing with the witness otherwise
    DiamondField witness;
};

PerpCertificate diamond_perp_certificate(const DiamondField& w, double const_tol = 1e-8);

// membership residual: distance of the field from the diamond_L ansatz
double decomposition_residual(const DiamondField& u);

} // namespace wavrel::diamond
