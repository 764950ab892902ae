#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavrel/characteristics.hpp"
#include "wavrel/geometry.hpp"

namespace wavrel::fields {

// Boundary field (phi, phi_n) sampled on per-component uniform grids;
// phi_n is the Euclidean-normal derivative channel.
struct BoundaryField {
    std::vector<std::vector<double>> phi;
    std::vector<std::vector<double>> phi_n;

    struct FourierForm {
        // per component, per channel: [a0, a1, b1, a2, b2, ...]
        std::vector<std::vector<double>> phi;
        std::vector<std::vector<double>> phi_n;
    };
    std::optional<FourierForm> fourier;

    std::size_t components() const { return phi.size(); }
    std::size_t grid() const { return phi.empty() ? 0 : phi[0].size(); }
};

// Pair of boundary 1-forms (alpha, beta), stored as densities against dt.
struct OneFormPair {
    std::vector<std::vector<double>> alpha;
    std::vector<std::vector<double>> beta;
    std::size_t components() const { return alpha.size(); }
};

// Scalar function on the boundary with optional analytic t-derivatives; the
// second derivative is consulted only at light-like parameters, where the
// L-field cotangent factor is resolved by its exact limit.
class BoundaryFn {
public:
    using Value = std::function<double(std::size_t, double)>;
    BoundaryFn(Value v) : value_(std::move(v)) {}
    BoundaryFn(Value v, Value dv) : value_(std::move(v)), deriv_(std::move(dv)) {}
    BoundaryFn(Value v, Value dv, Value ddv)
        : value_(std::move(v)), deriv_(std::move(dv)), deriv2_(std::move(ddv)) {}
    double operator()(std::size_t c, double t) const { return value_(c, t); }
    bool has_deriv() const { return static_cast<bool>(deriv_); }
    bool has_deriv2() const { return static_cast<bool>(deriv2_); }
    double deriv(std::size_t c, double t) const { return deriv_(c, t); }
    double deriv2(std::size_t c, double t) const { return deriv2_(c, t); }

private:
    Value value_;
    Value deriv_;
    Value deriv2_;
};

struct FieldConfig {
    std::size_t M = 1024;          // grid size per component
    double light_zone_rel = 1e-6;  // node replacement radius around light points
    double invariance_tol = 1e-6;
    double onesided_tol = 1e-6;    // two-sided extrapolation disagreement flag
    bool validate_invariance = true;
};

// Cached per-grid frame data for a domain.
struct GridGeometry {
    std::vector<std::vector<geom::Frame>> frames; // [component][node]
    std::vector<geom::LightPoint> lights;
    std::vector<double> periods;
    static GridGeometry build(const geom::Domain& domain, std::size_t M);
};

// E_pm-symmetrization (h + h o E)/2 sampled on the grid; nodes inside the
// exceptional zones are filled by matched one-sided limits.
std::vector<std::vector<double>> project_invariant(const geom::Domain& domain, int sign,
                                                   const BoundaryFn& h,
                                                   const FieldConfig& cfg = {});

// Evolution-relation field from an E_--invariant f and an E_+-invariant g:
// phi = f + g, phi_n = -(1/v)(cot(theta-pi/4) f' + cot(theta+pi/4) g').
// The cotangent singularities at light points cancel against the forced
// zeros of f', g'; singular nodes are filled by two-sided extrapolation.
BoundaryField make_L_field(const geom::Domain& domain, const BoundaryFn& f, const BoundaryFn& g,
                           const FieldConfig& cfg = {});
// variant with shared frame data (bulk family assembly)
BoundaryField make_L_field(const geom::Domain& domain, const GridGeometry& gg,
                           const BoundaryFn& f, const BoundaryFn& g, const FieldConfig& cfg);

// Characteristic 1-form components of a field.
OneFormPair rho(const geom::Domain& domain, const BoundaryField& u);

// Inverse of rho up to per-component constants: d(phi) = alpha + beta must be
// exact on every component; anchors fix phi at t = 0 per component.
BoundaryField rho_inverse(const geom::Domain& domain, const OneFormPair& pair,
                          const std::vector<double>& anchors, const FieldConfig& cfg = {});

// Residual of E-invariance of a density channel (alpha for sign -, beta for
// sign +), normalized by the sup norm: max |rho(E t) E'(t) - rho(t)|.
double form_invariance_residual(const geom::Domain& domain, int sign,
                                const std::vector<std::vector<double>>& density,
                                std::size_t probes = 64);

struct BasePoint {
    std::size_t component = 0;
    double t = 0.0;
    double phi = 0.0;
};

// Interior reconstruction phi(target) = phi(base) + int(p_-^* alpha + p_+^* beta)
// along a polyline path; verified against a second path.
double interior_value(const geom::Domain& domain, const OneFormPair& pair, const BasePoint& base,
                      geom::Vec2 target, double path_tol = 1e-7);

// Holonomy 1-form pairs (kappa_i restricted to the boundary, 0) for the N-1
// hole components; each kappa_i is psi_i + E_-^* psi_i for a quintic bump on
// an arc whose E_- image lies on a later component.
std::vector<OneFormPair> holonomy_basis(const geom::Domain& domain, const FieldConfig& cfg = {});

// The corresponding evolution-relation elements: the E_+ side is paired with
// a period-cancelling bump so that alpha + beta is exact and rho_inverse
// applies.
std::vector<BoundaryField> holonomy_fields(const geom::Domain& domain, const FieldConfig& cfg = {});

// --- field CSV files (see README for the exact layout) ---

void write_field_csv(std::ostream& os, const geom::Domain& domain, const BoundaryField& u);
BoundaryField read_field_csv(std::istream& is, const std::string& expected_hash = {});
void write_pair_csv(std::ostream& os, const geom::Domain& domain, const OneFormPair& pair);

} // namespace wavrel::fields
