#pragma once

#include <cstddef>
#include <vector>

#include "wavrel/fields.hpp"
#include "wavrel/geometry.hpp"

#include <Eigen/Dense>

namespace wavrel::symp {

// Boundary symplectic pairing of two fields, assembled from the (Gamma,u,mu)
// data of the domain's metric and Euclidean normal.
double omega(const geom::Domain& domain, const fields::BoundaryField& u,
             const fields::BoundaryField& w);

// max |omega(b_i, b_j)| normalized by the field L2 norms.
double isotropy_residual(const geom::Domain& domain,
                         const std::vector<fields::BoundaryField>& basis);

struct PairingMatrix {
    Eigen::MatrixXd omega;     // antisymmetric on the Fourier test basis
    std::size_t K = 0;         // Fourier degree of the basis
    std::size_t M = 0;         // grid
    std::size_t components = 0;
    double antisymmetry_residual = 0.0;
    std::vector<std::string> labels;
};

PairingMatrix pairing_matrix(const geom::Domain& domain, std::size_t K, std::size_t M = 1024);

// Truncated-rank certificate for the evolution relation: dimensions of the
// sampled L-glob family and its omega-orthogonal inside the Fourier test
// space augmented with the N-1 holonomy carrier fields. The headline defect
// measures dim(L_glob^perp) - dim(L_glob) (expected 2(N-1)); the full-L
// variant adds the holonomy elements to the family (expected defect 0).
struct DefectReport {
    int dim_L = 0;           // L-glob family inside the test space
    int dim_L_perp = 0;
    int defect = 0;          // dim_L_perp - dim_L
    int dim_L_full = 0;      // with holonomy elements
    int dim_L_full_perp = 0;
    int lagrangian_defect = 0;
    std::vector<double> spectrum; // singular values of the glob pairing block
    double threshold = 0.0;
    std::size_t K = 0;
    std::size_t M = 0;
    double family_residual = 0.0; // worst isotropy of the assembled family
    bool ill_conditioned = false;
};

DefectReport truncated_reduction(const geom::Domain& domain, std::size_t K, std::size_t M = 1024,
                                 std::size_t family_margin = 8);

// Period vectors (oint alpha, oint beta) per component: the sigma map.
struct PeriodVectors {
    std::vector<double> alpha;
    std::vector<double> beta;
};
PeriodVectors periods(const geom::Domain& domain, const fields::OneFormPair& pair);

// Affine conformal transformations of the Minkowski plane.
geom::Affine conformal_translation(geom::Vec2 shift);
geom::Affine conformal_boost(double rapidity);
geom::Affine conformal_scaling(double factor);
geom::Affine compose(const geom::Affine& outer_map, const geom::Affine& inner_map);
bool is_minkowski_conformal(const geom::Affine& map, double tol = 1e-10);

// Push a domain and a boundary field through an affine conformal map; phi
// composes, phi_n is rebuilt against the image curve's Euclidean normal.
std::pair<geom::Domain, fields::BoundaryField> conformal_push(const geom::Affine& map,
                                                              const geom::Domain& domain,
                                                              const fields::BoundaryField& u);

// Smooth, exactly E_pm-invariant scalar family built from the null coordinate
// (x+y for sign -, y-x for sign +): global Chebyshev modes plus windowed band
// modes on the chord complex of all-circle domains.
std::vector<fields::BoundaryFn> invariant_family(const geom::Domain& domain, int sign,
                                                 std::size_t degree);

// Fourier test-space fields: modes <= K in both channels on every component.
std::vector<fields::BoundaryField> fourier_test_basis(const geom::Domain& domain, std::size_t K,
                                                      std::size_t M);

} // namespace wavrel::symp
