#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace wavrel {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeometryError : Error {
    using Error::Error;
};

// Assumption (B): finitely many light-like boundary points.
struct AssumptionBViolation : Error {
    using Error::Error;
};

// Assumption (C): nonzero boundary curvature at light-like points.
struct AssumptionCViolation : Error {
    using Error::Error;
};

} // namespace wavrel

namespace wavrel::geom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

// Affine map p -> M p + shift with M = [[m00,m01],[m10,m11]].
struct Affine {
    std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};
    Vec2 shift{};
    Vec2 apply(Vec2 p) const { return {m[0] * p.x + m[1] * p.y + shift.x, m[2] * p.x + m[3] * p.y + shift.y}; }
    Vec2 apply_linear(Vec2 v) const { return {m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y}; }
    double det() const { return m[0] * m[3] - m[1] * m[2]; }
};

enum class CurveKind { Circle, Ellipse, Fourier, Diamond };

// Smooth closed plane curve, optionally composed with an affine map.
// Fourier coefficients follow the layout [a0, a1, b1, a2, b2, ...] for
// a0 + sum_k (a_k cos(2 pi k t / T) + b_k sin(2 pi k t / T)).
class ParamCurve {
public:
    static ParamCurve circle(double r, Vec2 center = {});
    static ParamCurve ellipse(double a, double b, Vec2 center = {});
    static ParamCurve fourier(std::vector<double> cx, std::vector<double> cy, double period);
    static ParamCurve diamond(double sp0, double sp1, double sm0, double sm1);

    CurveKind kind() const { return kind_; }
    double period() const { return period_; }

    Vec2 position(double t) const;
    Vec2 velocity(double t) const;
    Vec2 acceleration(double t) const;

    const Affine& transform() const { return map_; }
    ParamCurve transformed(const Affine& map) const;

    // shape parameters (valid for the matching kind)
    double radius() const { return p0_; }
    Vec2 center() const { return center_; }
    double semi_a() const { return p0_; }
    double semi_b() const { return p1_; }
    const std::vector<double>& coeff_x() const { return cx_; }
    const std::vector<double>& coeff_y() const { return cy_; }
    // diamond corners in (sigma+, sigma-) coordinates
    std::array<double, 4> diamond_box() const { return {p0_, p1_, q0_, q1_}; }

    bool has_transform() const;

private:
    CurveKind kind_ = CurveKind::Circle;
    double period_ = 0.0;
    double p0_ = 0.0, p1_ = 0.0, q0_ = 0.0, q1_ = 0.0;
    Vec2 center_{};
    std::vector<double> cx_, cy_;
    Affine map_{};

    Vec2 base_position(double t) const;
    Vec2 base_velocity(double t) const;
    Vec2 base_acceleration(double t) const;
};

enum class MetricKind { Minkowski, Conformal, Misner };

// Lorentzian metric on the plane chart: dx^2 - dy^2, Omega(x,y)*(dx^2 - dy^2)
// with polynomial Omega, or the Misner cylinder metric dx dy - y dx^2.
struct MetricField {
    MetricKind kind = MetricKind::Minkowski;
    std::vector<std::vector<double>> omega_poly; // omega_poly[i][j] * x^i y^j
    double conformal_factor(Vec2 p) const;
};

struct Frame {
    Vec2 position;
    Vec2 tangent_unit;
    double theta = 0.0; // normal angle mod pi, in [0, pi)
    double v = 0.0;     // parametrization speed
    double kappa = 0.0; // signed Euclidean curvature
};

struct LightPoint {
    std::size_t component = 0;
    double t = 0.0;
    int sign = 0; // -1: I_-, +1: I_+
    double kappa = 0.0;
};

struct BoundaryTriple {
    double gamma = 0.0;   // Gamma
    double u_coef = 0.0;  // tangential coefficient of u against d/dt
    double mu_dens = 0.0; // density of mu against dt
};

struct Tolerances {
    std::size_t root_grid = 4096;      // bracketing grid per component
    double t_tol_rel = 1e-12;          // bisection tolerance, relative to T
    double kappa_min = 1e-6;           // assumption (C) threshold
    double light_arc_tol = 1e-9;       // flat-stretch detector for assumption (B)
};

// Oriented multi-component boundary with a metric. Component parametrations
// are domain-oriented: counterclockwise outer curve, clockwise holes.
class Domain {
public:
    struct Component {
        ParamCurve curve;
        bool reversed = false; // true when the stored curve runs against the domain orientation
        double period() const { return curve.period(); }
        Vec2 position(double t) const;
        Vec2 velocity(double t) const;
        Vec2 acceleration(double t) const;
    };

    Domain() = default;
    Domain(std::vector<Component> comps, std::size_t outer, MetricField metric, std::string canonical);

    std::size_t size() const { return comps_.size(); }
    const Component& component(std::size_t k) const { return comps_.at(k); }
    std::size_t outer_index() const { return outer_; }
    const MetricField& metric() const { return metric_; }
    bool is_misner() const { return metric_.kind == MetricKind::Misner; }

    bool contains(Vec2 p) const;
    bool all_conics() const { return all_conics_; }
    // signed conic coordinate (x/a)^2 + (y/b)^2 - 1 in the component's base
    // frame; only valid when all_conics() holds
    double conic_level(std::size_t k, Vec2 p) const;
    double diameter() const { return diameter_; }
    const std::string& canonical_spec() const { return canonical_; }

private:
    std::vector<Component> comps_;
    std::size_t outer_ = 0;
    MetricField metric_;
    std::string canonical_;
    double diameter_ = 0.0;
    std::vector<std::vector<Vec2>> polys_; // cached polylines for containment
    bool all_conics_ = false;              // exact tests instead of winding numbers

    friend Domain make_domain(const nlohmann::json& spec);
    friend Domain make_domain_from_parts(std::vector<ParamCurve> curves, std::size_t outer,
                                         MetricField metric);
};

// Build and validate a Domain from its JSON description.
Domain make_domain(const nlohmann::json& spec);
Domain make_domain(const std::string& json_text);
Domain make_domain_from_parts(std::vector<ParamCurve> curves, std::size_t outer, MetricField metric);

// Frame data of the oriented component at parameter t.
Frame frame(const Domain::Component& comp, double t);
Frame frame(const ParamCurve& curve, double t);

// All light-like boundary points, classified into I_- and I_+.
std::vector<LightPoint> light_points(const Domain& domain, const Tolerances& tol = {});

// Boundary geometric data (Gamma, u, mu) for a transversal field; the
// default is the Euclidean outward unit normal.
BoundaryTriple boundary_data(const Domain& domain, std::size_t component, double t,
                             std::optional<Vec2> custom_normal = std::nullopt);

// FNV-1a hash of the canonical domain description, hex-encoded.
std::string domain_hash(const Domain& domain);

} // namespace wavrel::geom
