#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "wavrel/geometry.hpp"

namespace wavrel::ham {

// Boundary field on the unit circle in the radial normalization: phi_n is the
// d_xi derivative (xi = log r), which makes circles of different radii
// canonically identified.
struct CircleField {
    std::vector<double> phi;
    std::vector<double> phi_n;
    std::size_t grid() const { return phi.size(); }
};

inline constexpr std::array<double, 4> light_angles = {
    0.25 * 3.14159265358979323846, 0.75 * 3.14159265358979323846,
    1.25 * 3.14159265358979323846, 1.75 * 3.14159265358979323846};

// Radial Hamiltonian H = (1/2) oint cos(2 theta) (phi_n^2 + (d_theta phi)^2).
double hamiltonian_H(const CircleField& u);

// Residuals of the C0 condition (d_theta phi_n - d_theta phi) at the four
// light angles, normalized by the field scale.
std::array<double, 4> c0_residuals(const CircleField& u);

// Hamiltonian vector field: (phi_n, [sin(2t) d phi_n + d(sin(2t) phi_n +
// cos(2t) d phi)] / cos(2t)), the 0/0 limits at light angles resolved by
// l'Hopital. Throws when the C0 residual exceeds c0_tol.
CircleField ham_vector(const CircleField& u, double c0_tol = 1e-6);

// Gotay-Nester-Hinds style recursion: C_k = {u in C_{k-1} : Hvec u in C_{k-1}}.
// Each application of the vector field amplifies grid round-off, so levels
// are dealiased and judged against the noise floor that a built-in exact
// solution reaches at the same depth and grid; exceeding that floor by a
// wide factor is the genuine constraint violation.
struct ConstraintDiagnostic {
    struct Level {
        std::array<double, 4> residuals{};
        double scale = 1.0;
        double noise_floor = 0.0; // relative floor of the exact-solution reference
        bool pass = false;
    };
    std::vector<Level> levels;
    std::size_t deepest_pass = 0; // number of consecutive passing levels
};

ConstraintDiagnostic constraint_chain(const CircleField& u, std::size_t k_max,
                                      double tol = 1e-6);

// Characteristic 1-form densities on the unit circle (conformal
// normalization, so no metric factors appear).
struct CircleForms {
    std::vector<double> alpha;
    std::vector<double> beta;
};
CircleForms circle_forms(const CircleField& u);

// E_pm-invariance residuals of (alpha, beta) on the arcs U_-(xi), U_+(xi) of
// half-width theta0 = arccos(exp(-xi)).
struct XiMembership {
    double alpha_residual = 0.0;
    double beta_residual = 0.0;
    double theta0 = 0.0;
};
XiMembership c_xi_membership(const CircleField& u, double xi);

// Backward reduced flow F_{-xi}: outer unit-circle data to the trace on the
// concentric circle of radius exp(-xi), transported along characteristics.
CircleField reduced_flow_neg(const CircleField& u, double xi, double membership_tol = 1e-6);

// Sampled basis of the flow kernel C(-xi)^perp: forms supported on the
// invariance arcs with the anchor condition phi(pi/4) + int alpha = 0.
std::vector<CircleField> c_xi_kernel_basis(double xi, std::size_t modes_per_arc, std::size_t M);

// Symplectic pairing on the circle in the radial normalization.
double circle_omega(const CircleField& u, const CircleField& w);

// sup-norm distance between the composed flow (through the intermediate
// radius) and the direct flow, relative to the field scale.
double flow_composition_residual(const CircleField& u, double xi, double xi2,
                                 double membership_tol = 1e-6);

} // namespace wavrel::ham
