#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wavrel/characteristics.hpp"
#include "wavrel/fields.hpp"
#include "wavrel/geometry.hpp"

namespace wavrel::dirichlet {

// Orbit of a boundary point under the composed map E_+ E_-.
struct OrbitRecord {
    chars::BoundaryPoint start{};
    std::vector<chars::BoundaryPoint> iterates; // composed-map images
    std::optional<std::size_t> period;
    double rotation_estimate = 0.0; // fraction of a turn, in [0,1)
    bool rotation_converged = false;
    double discrepancy = 0.0; // sup-norm vs uniform on a 64-bin histogram
};

OrbitRecord orbit(const geom::Domain& domain, chars::BoundaryPoint p, std::size_t n_iter,
                  double orbit_tol_rel = 1e-9);

// Alternating sum sum_i phi((E+E-)^i p) - phi(E-(E+E-)^i p); zero is
// necessary for phi to lie in the image of the Dirichlet map.
double existence_obstruction(const geom::Domain& domain,
                             const std::vector<std::vector<double>>& phi, chars::BoundaryPoint p,
                             std::size_t n, double orbit_tol_rel = 1e-9);

// Kernel element of the Dirichlet map over a periodic arc: a field with
// phi = 0 and phi_n != 0 built from a simultaneously E_+/E_- invariant bump
// average. Throws when the arc is not (E+E-)^n-periodic.
struct KernelField {
    fields::BoundaryField field;
    double invariance_residual_minus = 0.0;
    double invariance_residual_plus = 0.0;
};

KernelField kernel_field(const geom::Domain& domain, std::size_t component, double arc_lo,
                         double arc_hi, std::size_t n, const fields::FieldConfig& cfg = {});

// Birkhoff rotation number of E_+ E_- on one component, with a convergence
// flag |rho_n - rho_{n/2}|.
struct RotationEstimate {
    double value = 0.0;
    double delta = 0.0;
    bool converged = false;
};

RotationEstimate rotation_number(const geom::Domain& domain, std::size_t component,
                                 std::size_t n_iter);

} // namespace wavrel::dirichlet
