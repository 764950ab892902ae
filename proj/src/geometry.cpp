#include "wavrel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wavrel/numerics.hpp"

namespace wavrel::geom {

using nlohmann::json;
using num::pi;
using num::two_pi;

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// --- ParamCurve -----------------------------------------------------------

ParamCurve ParamCurve::circle(double r, Vec2 center) {
    if (r <= 0.0) throw GeometryError("circle radius must be positive");
    ParamCurve c;
    c.kind_ = CurveKind::Circle;
    c.p0_ = r;
    c.center_ = center;
    c.period_ = two_pi;
    return c;
}

ParamCurve ParamCurve::ellipse(double a, double b, Vec2 center) {
    if (a <= 0.0 || b <= 0.0) throw GeometryError("ellipse semi-axes must be positive");
    ParamCurve c;
    c.kind_ = CurveKind::Ellipse;
    c.p0_ = a;
    c.p1_ = b;
    c.center_ = center;
    c.period_ = two_pi;
    return c;
}

ParamCurve ParamCurve::fourier(std::vector<double> cx, std::vector<double> cy, double period) {
    if (period <= 0.0) throw GeometryError("fourier curve period must be positive");
    if (cx.empty() || cy.empty()) throw GeometryError("fourier curve needs coefficients");
    ParamCurve c;
    c.kind_ = CurveKind::Fourier;
    c.cx_ = std::move(cx);
    c.cy_ = std::move(cy);
    c.period_ = period;
    return c;
}

ParamCurve ParamCurve::diamond(double sp0, double sp1, double sm0, double sm1) {
    if (sp1 <= sp0 || sm1 <= sm0) throw GeometryError("diamond corners out of order");
    ParamCurve c;
    c.kind_ = CurveKind::Diamond;
    c.p0_ = sp0;
    c.p1_ = sp1;
    c.q0_ = sm0;
    c.q1_ = sm1;
    c.period_ = 4.0;
    return c;
}

bool ParamCurve::has_transform() const {
    return map_.m != std::array<double, 4>{1.0, 0.0, 0.0, 1.0} || map_.shift.x != 0.0 ||
           map_.shift.y != 0.0;
}

ParamCurve ParamCurve::transformed(const Affine& map) const {
    ParamCurve c = *this;
    // compose: new point = map(old map(p))
    Affine combined;
    combined.m = {map.m[0] * map_.m[0] + map.m[1] * map_.m[2],
                  map.m[0] * map_.m[1] + map.m[1] * map_.m[3],
                  map.m[2] * map_.m[0] + map.m[3] * map_.m[2],
                  map.m[2] * map_.m[1] + map.m[3] * map_.m[3]};
    combined.shift = map.apply(map_.shift);
    c.map_ = combined;
    return c;
}

namespace {

// evaluate a trig series [a0, a1, b1, ...] and derivatives at angle w = 2 pi t / T
void eval_series(const std::vector<double>& c, double w, double scale, double& f, double& df,
                 double& ddf) {
    f = c.empty() ? 0.0 : c[0];
    df = 0.0;
    ddf = 0.0;
    const std::size_t nk = c.size() / 2;
    for (std::size_t k = 1; k <= nk; ++k) {
        const double a = c[2 * k - 1];
        const double b = (2 * k < c.size()) ? c[2 * k] : 0.0;
        const double ck = std::cos(k * w), sk = std::sin(k * w);
        const double kw = static_cast<double>(k) * scale;
        f += a * ck + b * sk;
        df += kw * (-a * sk + b * ck);
        ddf += -kw * kw * (a * ck + b * sk);
    }
}

} // namespace

Vec2 ParamCurve::base_position(double t) const {
    switch (kind_) {
        case CurveKind::Circle:
            return {center_.x + p0_ * std::cos(t), center_.y + p0_ * std::sin(t)};
        case CurveKind::Ellipse:
            return {center_.x + p0_ * std::cos(t), center_.y + p1_ * std::sin(t)};
        case CurveKind::Fourier: {
            const double w = two_pi / period_ * t;
            double x, dx, ddx, y, dy, ddy;
            eval_series(cx_, w, two_pi / period_, x, dx, ddx);
            eval_series(cy_, w, two_pi / period_, y, dy, ddy);
            return {x, y};
        }
        case CurveKind::Diamond: {
            // vertices in (x,y): a=(sp0,sm0) etc. mapped back from sigma+/-
            auto xy = [&](double sp, double sm) { return Vec2{0.5 * (sp - sm), 0.5 * (sp + sm)}; };
            const Vec2 a = xy(p0_, q0_), b = xy(p1_, q0_), c = xy(p1_, q1_), d = xy(p0_, q1_);
            double s = t - 4.0 * std::floor(t / 4.0);
            if (s < 1.0) return a + s * (b - a);
            if (s < 2.0) return b + (s - 1.0) * (c - b);
            if (s < 3.0) return c + (s - 2.0) * (d - c);
            return d + (s - 3.0) * (a - d);
        }
    }
    return {};
}

Vec2 ParamCurve::base_velocity(double t) const {
    switch (kind_) {
        case CurveKind::Circle:
            return {-p0_ * std::sin(t), p0_ * std::cos(t)};
        case CurveKind::Ellipse:
            return {-p0_ * std::sin(t), p1_ * std::cos(t)};
        case CurveKind::Fourier: {
            const double w = two_pi / period_ * t;
            double x, dx, ddx, y, dy, ddy;
            eval_series(cx_, w, two_pi / period_, x, dx, ddx);
            eval_series(cy_, w, two_pi / period_, y, dy, ddy);
            return {dx, dy};
        }
        case CurveKind::Diamond: {
            auto xy = [&](double sp, double sm) { return Vec2{0.5 * (sp - sm), 0.5 * (sp + sm)}; };
            const Vec2 a = xy(p0_, q0_), b = xy(p1_, q0_), c = xy(p1_, q1_), d = xy(p0_, q1_);
            double s = t - 4.0 * std::floor(t / 4.0);
            if (s < 1.0) return b - a;
            if (s < 2.0) return c - b;
            if (s < 3.0) return d - c;
            return a - d;
        }
    }
    return {};
}

Vec2 ParamCurve::base_acceleration(double t) const {
    switch (kind_) {
        case CurveKind::Circle:
            return {-p0_ * std::cos(t), -p0_ * std::sin(t)};
        case CurveKind::Ellipse:
            return {-p0_ * std::cos(t), -p1_ * std::sin(t)};
        case CurveKind::Fourier: {
            const double w = two_pi / period_ * t;
            double x, dx, ddx, y, dy, ddy;
            eval_series(cx_, w, two_pi / period_, x, dx, ddx);
            eval_series(cy_, w, two_pi / period_, y, dy, ddy);
            return {ddx, ddy};
        }
        case CurveKind::Diamond:
            return {};
    }
    return {};
}

Vec2 ParamCurve::position(double t) const { return map_.apply(base_position(t)); }
Vec2 ParamCurve::velocity(double t) const { return map_.apply_linear(base_velocity(t)); }
Vec2 ParamCurve::acceleration(double t) const { return map_.apply_linear(base_acceleration(t)); }

// --- MetricField -----------------------------------------------------------

double MetricField::conformal_factor(Vec2 p) const {
    if (kind != MetricKind::Conformal) return 1.0;
    double acc = 0.0;
    double xi = 1.0;
    for (const auto& row : omega_poly) {
        double yj = 1.0;
        for (double c : row) {
            acc += c * xi * yj;
            yj *= p.y;
        }
        xi *= p.x;
    }
    return acc;
}

// --- Domain ----------------------------------------------------------------

Vec2 Domain::Component::position(double t) const {
    return curve.position(reversed ? curve.period() - t : t);
}

Vec2 Domain::Component::velocity(double t) const {
    Vec2 v = curve.velocity(reversed ? curve.period() - t : t);
    return reversed ? Vec2{-v.x, -v.y} : v;
}

Vec2 Domain::Component::acceleration(double t) const {
    return curve.acceleration(reversed ? curve.period() - t : t);
}

namespace {

constexpr std::size_t kPolySamples = 1024;

double signed_area(const ParamCurve& c) {
    double acc = 0.0;
    const double T = c.period();
    const std::size_t n = kPolySamples;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = T * static_cast<double>(i) / static_cast<double>(n);
        acc += cross(c.position(t), c.velocity(t));
    }
    return 0.5 * acc * T / static_cast<double>(n);
}

double winding_number(const std::vector<Vec2>& poly, Vec2 p) {
    double total = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i] - p;
        const Vec2 b = poly[(i + 1) % n] - p;
        total += std::atan2(cross(a, b), dot(a, b));
    }
    return total / two_pi;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

} // namespace

Domain::Domain(std::vector<Component> comps, std::size_t outer, MetricField metric,
               std::string canonical)
    : comps_(std::move(comps)), outer_(outer), metric_(std::move(metric)),
      canonical_(std::move(canonical)) {
    double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    bool first = true;
    for (const auto& comp : comps_) {
        std::vector<Vec2> poly;
        poly.reserve(kPolySamples);
        const double T = comp.period();
        for (std::size_t i = 0; i < kPolySamples; ++i) {
            const Vec2 p = comp.position(T * static_cast<double>(i) / kPolySamples);
            poly.push_back(p);
            if (first) {
                lo_x = hi_x = p.x;
                lo_y = hi_y = p.y;
                first = false;
            } else {
                lo_x = std::min(lo_x, p.x);
                hi_x = std::max(hi_x, p.x);
                lo_y = std::min(lo_y, p.y);
                hi_y = std::max(hi_y, p.y);
            }
        }
        polys_.push_back(std::move(poly));
    }
    diameter_ = std::hypot(hi_x - lo_x, hi_y - lo_y);
    if (diameter_ <= 0.0) diameter_ = 1.0;
    all_conics_ = !comps_.empty();
    for (const auto& comp : comps_) {
        if (comp.curve.kind() != CurveKind::Circle && comp.curve.kind() != CurveKind::Ellipse) {
            all_conics_ = false;
        }
    }
}

double Domain::conic_level(std::size_t k, Vec2 p) const {
    const auto& cu = comps_[k].curve;
    const auto& A = cu.transform();
    const double det = A.det();
    const Vec2 rel0{p.x - A.shift.x, p.y - A.shift.y};
    const Vec2 base{(A.m[3] * rel0.x - A.m[1] * rel0.y) / det,
                    (-A.m[2] * rel0.x + A.m[0] * rel0.y) / det};
    const double a = cu.kind() == CurveKind::Circle ? cu.radius() : cu.semi_a();
    const double b = cu.kind() == CurveKind::Circle ? cu.radius() : cu.semi_b();
    const double x = (base.x - cu.center().x) / a;
    const double y = (base.y - cu.center().y) / b;
    return x * x + y * y - 1.0;
}

bool Domain::contains(Vec2 p) const {
    if (all_conics_) {
        for (std::size_t k = 0; k < comps_.size(); ++k) {
            const double lv = conic_level(k, p);
            if (k == outer_ ? lv > 0.0 : lv < 0.0) return false;
        }
        return true;
    }
    double w = 0.0;
    for (const auto& poly : polys_) w += winding_number(poly, p);
    return std::lround(w) != 0;
}

// --- make_domain -----------------------------------------------------------

namespace {

ParamCurve curve_from_json(const json& jc) {
    const std::string kind = jc.at("kind").get<std::string>();
    Vec2 center{};
    if (jc.contains("center")) {
        center = {jc["center"].at(0).get<double>(), jc["center"].at(1).get<double>()};
    }
    if (kind == "circle") return ParamCurve::circle(jc.at("r").get<double>(), center);
    if (kind == "ellipse")
        return ParamCurve::ellipse(jc.at("a").get<double>(), jc.at("b").get<double>(), center);
    if (kind == "fourier") {
        return ParamCurve::fourier(jc.at("cx").get<std::vector<double>>(),
                                   jc.at("cy").get<std::vector<double>>(),
                                   jc.value("T", two_pi));
    }
    if (kind == "diamond") {
        const auto& sp = jc.at("sp");
        const auto& sm = jc.at("sm");
        return ParamCurve::diamond(sp.at(0).get<double>(), sp.at(1).get<double>(),
                                   sm.at(0).get<double>(), sm.at(1).get<double>());
    }
    throw GeometryError("unknown curve kind: " + kind);
}

MetricField metric_from_json(const json& jm) {
    MetricField m;
    if (jm.is_string()) {
        const std::string s = jm.get<std::string>();
        if (s == "minkowski") {
            m.kind = MetricKind::Minkowski;
        } else if (s == "misner") {
            m.kind = MetricKind::Misner;
        } else {
            throw GeometryError("unknown metric kind: " + s);
        }
        return m;
    }
    if (jm.is_object() && jm.contains("conformal")) {
        m.kind = MetricKind::Conformal;
        for (const auto& row : jm["conformal"].at("poly")) {
            m.omega_poly.push_back(row.get<std::vector<double>>());
        }
        return m;
    }
    throw GeometryError("malformed metric specification");
}

void validate_metric(const Domain& dom) {
    if (dom.metric().kind != MetricKind::Conformal) return;
    // Omega must stay positive over the bounding box of the boundary
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (std::size_t k = 0; k < dom.size(); ++k) {
        const auto& c = dom.component(k);
        for (int i = 0; i < 256; ++i) {
            const Vec2 p = c.position(c.period() * i / 256.0);
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_y = std::max(hi_y, p.y);
        }
    }
    for (int i = 0; i <= 32; ++i) {
        for (int j = 0; j <= 32; ++j) {
            const Vec2 p{lo_x + (hi_x - lo_x) * i / 32.0, lo_y + (hi_y - lo_y) * j / 32.0};
            if (!(dom.metric().conformal_factor(p) > 0.0)) {
                throw GeometryError("metric not Lorentzian: conformal factor not positive");
            }
        }
    }
}

void validate_regular_and_simple(const Domain& dom) {
    constexpr std::size_t n = 512;
    std::vector<std::vector<Vec2>> polys;
    for (std::size_t k = 0; k < dom.size(); ++k) {
        const auto& c = dom.component(k);
        const double T = c.period();
        std::vector<Vec2> poly(n);
        const bool corners = c.curve.kind() == CurveKind::Diamond;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = T * static_cast<double>(i) / n;
            poly[i] = c.position(t);
            if (!corners && norm(c.velocity(t)) < 1e-12) {
                throw GeometryError("curve irregular: zero velocity at sampled parameter");
            }
        }
        polys.push_back(std::move(poly));
    }
    // pairwise segment crossings on the sampling grid
    for (std::size_t a = 0; a < polys.size(); ++a) {
        for (std::size_t b = a; b < polys.size(); ++b) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = (a == b ? i + 2 : 0); j < n; ++j) {
                    if (a == b && i == 0 && j == n - 1) continue;
                    if (segments_cross(polys[a][i], polys[a][(i + 1) % n], polys[b][j],
                                       polys[b][(j + 1) % n])) {
                        throw GeometryError(a == b ? "curve self-intersects on sampling grid"
                                                   : "boundary components intersect");
                    }
                }
            }
        }
    }
}

} // namespace

Domain make_domain(const json& spec) {
    MetricField metric = metric_from_json(spec.at("metric"));
    std::vector<ParamCurve> curves;
    if (spec.contains("curves")) {
        for (const auto& jc : spec["curves"]) curves.push_back(curve_from_json(jc));
    }
    if (metric.kind == MetricKind::Misner) {
        if (!curves.empty()) throw GeometryError("misner domain has a fixed cylinder boundary");
        Domain dom({}, 0, metric, json{{"metric", "misner"}}.dump());
        return dom;
    }
    if (curves.empty()) throw GeometryError("domain needs at least one curve");

    std::size_t outer = spec.value("outer", static_cast<std::size_t>(0));
    if (!spec.contains("outer")) {
        double best = -1.0;
        for (std::size_t k = 0; k < curves.size(); ++k) {
            const double a = std::abs(signed_area(curves[k]));
            if (a > best) {
                best = a;
                outer = k;
            }
        }
    }
    if (outer >= curves.size()) throw GeometryError("outer index out of range");

    std::vector<Domain::Component> comps;
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const double area = signed_area(curves[k]);
        const bool want_ccw = (k == outer);
        Domain::Component comp{curves[k], false};
        comp.reversed = want_ccw ? (area < 0.0) : (area > 0.0);
        comps.push_back(std::move(comp));
    }

    Domain dom(std::move(comps), outer, metric, spec.dump());
    validate_metric(dom);
    validate_regular_and_simple(dom);
    return dom;
}

Domain make_domain(const std::string& json_text) { return make_domain(json::parse(json_text)); }

namespace {

json curve_to_json(const ParamCurve& c) {
    json j;
    switch (c.kind()) {
        case CurveKind::Circle:
            j = {{"kind", "circle"}, {"r", c.radius()}, {"center", {c.center().x, c.center().y}}};
            break;
        case CurveKind::Ellipse:
            j = {{"kind", "ellipse"}, {"a", c.semi_a()}, {"b", c.semi_b()},
                 {"center", {c.center().x, c.center().y}}};
            break;
        case CurveKind::Fourier:
            j = {{"kind", "fourier"}, {"cx", c.coeff_x()}, {"cy", c.coeff_y()}, {"T", c.period()}};
            break;
        case CurveKind::Diamond: {
            const auto bx = c.diamond_box();
            j = {{"kind", "diamond"}, {"sp", {bx[0], bx[1]}}, {"sm", {bx[2], bx[3]}}};
            break;
        }
    }
    if (c.has_transform()) {
        const auto& a = c.transform();
        j["map"] = {{"m", {a.m[0], a.m[1], a.m[2], a.m[3]}}, {"shift", {a.shift.x, a.shift.y}}};
    }
    return j;
}

} // namespace

Domain make_domain_from_parts(std::vector<ParamCurve> curves, std::size_t outer,
                              MetricField metric) {
    json spec;
    spec["metric"] = metric.kind == MetricKind::Misner ? "misner" : "minkowski";
    spec["curves"] = json::array();
    for (const auto& c : curves) spec["curves"].push_back(curve_to_json(c));
    spec["outer"] = outer;

    std::vector<Domain::Component> comps;
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const double area = signed_area(curves[k]);
        const bool want_ccw = (k == outer);
        Domain::Component comp{curves[k], false};
        comp.reversed = want_ccw ? (area < 0.0) : (area > 0.0);
        comps.push_back(std::move(comp));
    }
    Domain dom(std::move(comps), outer, std::move(metric), spec.dump());
    validate_regular_and_simple(dom);
    return dom;
}

// --- frame / light points / boundary data ----------------------------------

namespace {

Frame frame_impl(Vec2 pos, Vec2 vel, Vec2 acc) {
    Frame f;
    f.position = pos;
    f.v = norm(vel);
    if (f.v < 1e-14) throw GeometryError("frame: irregular point (v = 0)");
    f.tangent_unit = (1.0 / f.v) * vel;
    // theta = two-argument angle of the tangent + pi/2, reduced mod pi
    double th = std::atan2(vel.y, vel.x) + 0.5 * pi;
    th = std::fmod(th, pi);
    if (th < 0) th += pi;
    f.theta = th;
    f.kappa = cross(vel, acc) / (f.v * f.v * f.v);
    return f;
}

} // namespace

Frame frame(const Domain::Component& comp, double t) {
    return frame_impl(comp.position(t), comp.velocity(t), comp.acceleration(t));
}

Frame frame(const ParamCurve& curve, double t) {
    return frame_impl(curve.position(t), curve.velocity(t), curve.acceleration(t));
}

std::vector<LightPoint> light_points(const Domain& domain, const Tolerances& tol) {
    if (domain.is_misner()) {
        throw GeometryError("light_points: misner boundary handled by the misner module");
    }
    std::vector<LightPoint> out;
    for (std::size_t k = 0; k < domain.size(); ++k) {
        const auto& comp = domain.component(k);
        if (comp.curve.kind() == CurveKind::Diamond) {
            throw AssumptionBViolation("light-like boundary edge: diamond curves have null edges");
        }
        const double T = comp.period();
        auto f = [&](double t) { return std::cos(2.0 * frame(comp, t).theta); };

        // flat-stretch detector: a run of near-zero samples means a light-like arc
        std::size_t flat_run = 0;
        for (std::size_t i = 0; i < tol.root_grid; ++i) {
            const double val = f(T * static_cast<double>(i) / static_cast<double>(tol.root_grid));
            flat_run = (std::abs(val) < tol.light_arc_tol) ? flat_run + 1 : 0;
            if (flat_run >= 8) {
                throw AssumptionBViolation("light-like boundary arc detected (assumption B)");
            }
        }

        const auto roots = num::roots_periodic(f, T, tol.root_grid, tol.t_tol_rel * T);
        for (double t : roots) {
            const Frame fr = frame(comp, t);
            if (std::abs(fr.kappa) < tol.kappa_min) {
                throw AssumptionCViolation("zero curvature at light-like point (assumption C)");
            }
            LightPoint lp;
            lp.component = k;
            lp.t = t;
            lp.kappa = fr.kappa;
            // I_-: theta = pi/4 (mod pi); I_+: theta = 3 pi/4 (mod pi)
            lp.sign = std::abs(fr.theta - 0.25 * pi) < std::abs(fr.theta - 0.75 * pi) ? -1 : +1;
            out.push_back(lp);
        }
    }
    return out;
}

BoundaryTriple boundary_data(const Domain& domain, std::size_t component, double t,
                             std::optional<Vec2> custom_normal) {
    const auto& comp = domain.component(component);
    const Vec2 vel = comp.velocity(t);
    const double v = norm(vel);
    if (v < 1e-14) throw GeometryError("boundary_data: irregular point");
    const Vec2 tau{vel.x / v, vel.y / v};

    Vec2 n;
    if (custom_normal) {
        n = *custom_normal;
    } else {
        n = {tau.y, -tau.x}; // outward for domain-oriented boundary (ccw outer)
    }
    const double transversal = cross(n, tau);
    if (std::abs(transversal) < 1e-12) {
        throw GeometryError("boundary_data: chosen field is tangent to the boundary");
    }

    // covector n*: <n*, n> = 1, <n*, tau> = 0
    const double denom = n.x * (-tau.y) + n.y * tau.x;
    const Vec2 nstar{-tau.y / denom, tau.x / denom};

    const Vec2 pos = comp.position(t);
    const double omega = domain.metric().conformal_factor(pos);
    if (domain.metric().kind == MetricKind::Misner) {
        throw GeometryError("boundary_data: misner handled by the misner module");
    }

    BoundaryTriple out;
    // g^{-1} = Omega^{-1} diag(1,-1); mu_g = Omega dx ^ dy
    out.gamma = (nstar.x * nstar.x - nstar.y * nstar.y) / omega;
    const Vec2 raised{nstar.x / omega, -nstar.y / omega};
    const Vec2 u_vec = raised - out.gamma * n;
    out.u_coef = dot(u_vec, vel) / (v * v);
    out.mu_dens = omega * (n.x * vel.y - n.y * vel.x);
    return out;
}

std::string domain_hash(const Domain& domain) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : domain.canonical_spec()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace wavrel::geom
