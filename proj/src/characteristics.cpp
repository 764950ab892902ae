#include "wavrel/characteristics.hpp"

#include <algorithm>
#include <cmath>

#include "wavrel/numerics.hpp"

namespace wavrel::chars {

using geom::Domain;
using geom::Vec2;
using num::pi;
using num::two_pi;

namespace {

Vec2 null_direction(int sign) {
    const double s = 1.0 / std::sqrt(2.0);
    return sign < 0 ? Vec2{-s, s} : Vec2{s, s};
}

double wrap_pm_pi(double a) {
    a = std::fmod(a + pi, two_pi);
    if (a < 0) a += two_pi;
    return a - pi;
}

double wrap_period(double t, double T) {
    t = std::fmod(t, T);
    if (t < 0) t += T;
    return t;
}

struct Crossing {
    double s = 0.0;
    std::size_t component = 0;
    double t = 0.0;
};

// intersections of the ray line p0 + s*d with one component
void component_crossings(const Domain& dom, std::size_t k, Vec2 p0, Vec2 d,
                         const TraceConfig& cfg, std::vector<Crossing>& out) {
    const auto& comp = dom.component(k);
    const auto& curve = comp.curve;
    const double T = comp.period();

    auto push = [&](double s, double t) { out.push_back({s, k, wrap_period(t, T)}); };

    const bool analytic = (curve.kind() == geom::CurveKind::Circle ||
                           curve.kind() == geom::CurveKind::Ellipse);
    if (analytic) {
        // solve in the base curve's coordinates; affine maps keep the ray parameter
        const auto& A = curve.transform();
        const double det = A.det();
        const double inv[4] = {A.m[3] / det, -A.m[1] / det, -A.m[2] / det, A.m[0] / det};
        auto apply_inv = [&](Vec2 q) {
            return Vec2{inv[0] * q.x + inv[1] * q.y, inv[2] * q.x + inv[3] * q.y};
        };
        const Vec2 rel0 = apply_inv(p0 - A.shift);
        const Vec2 dd = apply_inv(d);
        const double a = curve.kind() == geom::CurveKind::Circle ? curve.radius() : curve.semi_a();
        const double b = curve.kind() == geom::CurveKind::Circle ? curve.radius() : curve.semi_b();
        const Vec2 c = curve.center();
        const double rx = (rel0.x - c.x) / a, ry = (rel0.y - c.y) / b;
        const double dx = dd.x / a, dy = dd.y / b;
        const double qa = dx * dx + dy * dy;
        const double qb = 2.0 * (rx * dx + ry * dy);
        const double qc = rx * rx + ry * ry - 1.0;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc < -1e-14 || qa == 0.0) return;
        const double sq = std::sqrt(std::max(0.0, disc));
        for (double s : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
            const double bx = rx + s * dx, by = ry + s * dy;
            double tb = std::atan2(by, bx);
            tb = wrap_period(tb, two_pi);
            push(s, comp.reversed ? T - tb : tb);
            if (disc <= 1e-14) break; // tangential double root
        }
        return;
    }

    // generic path: roots of the perpendicular offset g(t) = cross(c(t)-p0, d)
    auto g = [&](double t) { return geom::cross(comp.position(t) - p0, d); };
    const double t_tol = cfg.t_tol_rel * T;
    for (double t : num::roots_periodic(g, T, cfg.bracket_grid, t_tol)) {
        push(geom::dot(comp.position(t) - p0, d), t);
    }
    // near-tangential contacts: minima of |g| that do not change sign
    const std::size_t n = cfg.bracket_grid;
    const double touch_tol = 1e-9 * dom.diameter();
    double gm1 = g(T * static_cast<double>(n - 1) / n), g0 = g(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double tp = T * static_cast<double>(i + 1) / n;
        const double gp = g(tp);
        if (std::abs(g0) < touch_tol && std::abs(g0) <= std::abs(gm1) && std::abs(g0) <= std::abs(gp) &&
            gm1 * gp > 0.0) {
            const double t = T * static_cast<double>(i) / n;
            push(geom::dot(comp.position(t) - p0, d), t);
        }
        gm1 = g0;
        g0 = gp;
    }
}

std::vector<Crossing> line_crossings(const Domain& dom, Vec2 p0, Vec2 d, const TraceConfig& cfg) {
    std::vector<Crossing> out;
    for (std::size_t k = 0; k < dom.size(); ++k) component_crossings(dom, k, p0, d, cfg, out);
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.s < b.s; });
    return out;
}

bool segment_inside(const Domain& dom, Vec2 p0, Vec2 d, double s) {
    if (dom.all_conics()) {
        // exact: the open segment must stay out of every hole (the convex
        // outer conic contains its own chords automatically)
        const Vec2 q = p0 + s * d;
        for (std::size_t k = 0; k < dom.size(); ++k) {
            if (k == dom.outer_index()) continue;
            // the conic level is quadratic along the segment; it dips below
            // zero iff the minimum over [0,1] does
            const double l0 = dom.conic_level(k, p0);
            const double l1 = dom.conic_level(k, q);
            const double lm = dom.conic_level(k, p0 + 0.5 * s * d);
            // fit l(tau) = a tau^2 + b tau + c through the three samples
            const double c = l0;
            const double a = 2.0 * (l0 + l1 - 2.0 * lm);
            const double b = l1 - l0 - a;
            double lmin = std::min(l0, l1);
            if (a > 0.0) {
                const double tau = -b / (2.0 * a);
                if (tau > 0.0 && tau < 1.0) lmin = std::min(lmin, c + tau * (b + a * tau));
            } else {
                lmin = std::min(lmin, lm);
            }
            if (lmin < -1e-12) return false;
        }
        return true;
    }
    for (int i = 1; i < 16; ++i) {
        if (!dom.contains(p0 + (s * static_cast<double>(i) / 16.0) * d)) return false;
    }
    return true;
}

// valid chord targets from a boundary point, one per ray direction at most
std::vector<BoundaryPoint> chord_targets(const Domain& dom, Vec2 p0, int sign,
                                         const TraceConfig& cfg) {
    const Vec2 d = null_direction(sign);
    const double s_eps = cfg.s_eps_rel * dom.diameter();
    auto crossings = line_crossings(dom, p0, d, cfg);
    std::vector<BoundaryPoint> targets;
    // nearest crossing on each side of s = 0
    const Crossing* pos = nullptr;
    const Crossing* neg = nullptr;
    for (const auto& c : crossings) {
        if (c.s > s_eps && (!pos || c.s < pos->s)) pos = &c;
        if (c.s < -s_eps && (!neg || c.s > neg->s)) neg = &c;
    }
    if (pos && segment_inside(dom, p0, d, pos->s)) targets.push_back({pos->component, pos->t});
    if (neg && segment_inside(dom, p0, d, neg->s)) targets.push_back({neg->component, neg->t});
    return targets;
}

struct MisnerState {
    double x, y;
    MisnerState operator+(const MisnerState& o) const { return {x + o.x, y + o.y}; }
};
inline MisnerState operator*(double a, const MisnerState& v) { return {a * v.x, a * v.y}; }

HitResult trace_misner(BoundaryPoint start, int sign) {
    HitResult res;
    const double x0 = wrap_period(start.t, two_pi);
    const double y0 = start.component == 0 ? -1.0 : 1.0;
    if (sign > 0) {
        res.outcome = HitOutcome::Hit;
        res.target = {1 - start.component, x0};
        res.path = {{x0, y0}, {x0, -y0}};
        return res;
    }
    // d_- curves: dx/ds = -1, dy/ds = -y; they wind toward the null cycle y = 0.
    // Uniform steps in s resolve the approach: the y-increments shrink like y.
    double x = x0, y = y0, s = 0.0;
    res.path.push_back({x, y});
    for (int step = 0; step < 100000; ++step) {
        const double h = 0.02;
        MisnerState cur{x, y};
        cur = num::rk4_step(cur, s, h,
                            [](double, const MisnerState& q) { return MisnerState{-1.0, -q.y}; });
        x = cur.x;
        y = cur.y;
        s += h;
        if (res.path.size() < 4096) res.path.push_back({wrap_period(x, two_pi), y});
        if (std::abs(y) < 1e-8 && 1.0 / std::abs(y) > 1e6) {
            res.outcome = HitOutcome::Asymptotic;
            res.path.push_back({wrap_period(x, two_pi), y});
            return res;
        }
    }
    res.outcome = HitOutcome::Asymptotic;
    res.path.push_back({wrap_period(x, two_pi), y});
    return res;
}

} // namespace

HitResult trace_null(const Domain& domain, BoundaryPoint start, int sign, const TraceConfig& cfg) {
    if (domain.is_misner()) return trace_misner(start, sign);

    const auto& comp = domain.component(start.component);
    const Vec2 p0 = comp.position(start.t);
    const auto targets = chord_targets(domain, p0, sign, cfg);

    if (targets.size() == 1) {
        HitResult res;
        res.outcome = HitOutcome::Hit;
        res.target = targets[0];
        const Vec2 q = domain.component(targets[0].component).position(targets[0].t);
        res.path = {p0, q};
        return res;
    }

    const double c2t = std::cos(2.0 * geom::frame(comp, start.t).theta);
    if (std::abs(c2t) < 1e-6 || targets.size() == 2) {
        throw Error("trace_null: start point is light-like (tangent ray)");
    }
    throw Error("trace_null: no boundary intersection found (geometric failure)");
}

std::pair<BoundaryPoint, BoundaryPoint> trace_from_interior(const Domain& domain, Vec2 p, int sign,
                                                            const TraceConfig& cfg) {
    // no containment precondition: points on (or within roundoff of) the
    // boundary are legitimate path endpoints; a genuinely exterior point has
    // both crossings on one side and fails below
    const Vec2 d = null_direction(sign);
    auto crossings = line_crossings(domain, p, d, cfg);
    const double tiny = 1e-12 * domain.diameter();
    const Crossing* pos = nullptr;
    const Crossing* neg = nullptr;
    const Crossing* zero = nullptr;
    for (const auto& c : crossings) {
        if (c.s > tiny && (!pos || c.s < pos->s)) pos = &c;
        if (c.s < -tiny && (!neg || c.s > neg->s)) neg = &c;
        if (std::abs(c.s) <= tiny) zero = &c;
    }
    // a path endpoint on the boundary is its own foot on one side
    if (!pos && zero) pos = zero;
    if (!neg && zero) neg = zero;
    if (!pos || !neg) throw Error("trace_from_interior: chord does not close");
    return {{pos->component, pos->t}, {neg->component, neg->t}};
}

BoundaryPoint InvolutionMap::apply(BoundaryPoint p) const {
    auto res = trace_null(domain_, p, sign_, cfg_);
    if (res.outcome != HitOutcome::Hit) throw Error("involution: trace did not hit the boundary");
    return res.target;
}

double InvolutionMap::derivative(BoundaryPoint p, double step_rel) const {
    const double T = domain_.component(p.component).period();
    const double h = step_rel * T;
    const auto a = apply({p.component, wrap_period(p.t - h, T)});
    const auto b = apply({p.component, wrap_period(p.t + h, T)});
    if (a.component != b.component) throw Error("involution derivative across component jump");
    const double Tt = domain_.component(a.component).period();
    double dt = b.t - a.t;
    // unwrap across the period seam
    if (dt > 0.5 * Tt) dt -= Tt;
    if (dt < -0.5 * Tt) dt += Tt;
    return dt / (2.0 * h);
}

bool InvolutionMap::near_exceptional(BoundaryPoint p, double radius_rel) const {
    return class_order(p, radius_rel) != 2;
}

int InvolutionMap::class_order(BoundaryPoint p, double radius_rel) const {
    const double T = domain_.component(p.component).period();
    for (std::size_t i = 0; i < exceptional_.size(); ++i) {
        const auto& q = exceptional_[i];
        if (q.component != p.component) continue;
        double d = std::abs(wrap_period(p.t, T) - wrap_period(q.t, T));
        d = std::min(d, T - d);
        if (d < radius_rel * T) return exceptional_orders_[i];
    }
    return 2;
}

InvolutionMap involution_map(const Domain& domain, int sign, std::size_t grid,
                             const TraceConfig& cfg) {
    if (domain.is_misner() && sign < 0) {
        throw Error("involution undefined: misner d_- characteristics never return to the boundary");
    }
    InvolutionMap map;
    map.domain_ = domain;
    map.sign_ = sign;
    map.grid_ = grid;
    map.cfg_ = cfg;

    if (domain.is_misner()) {
        map.table_.resize(2);
        for (std::size_t k = 0; k < 2; ++k) {
            map.table_[k].resize(grid);
            for (std::size_t i = 0; i < grid; ++i) {
                const double x = two_pi * static_cast<double>(i) / static_cast<double>(grid);
                map.table_[k][i] = {true, {1 - k, x}};
            }
        }
        return map;
    }

    map.lights_ = geom::light_points(domain);

    // exceptional set I' from classes of order != 2 at matching-sign lights
    for (const auto& lp : map.lights_) {
        if (lp.sign != sign) continue;
        auto cls = equivalence_class(domain, sign, {lp.component, lp.t}, 16, cfg);
        if (cls.size() != 2) {
            for (const auto& q : cls) {
                map.exceptional_.push_back(q);
                map.exceptional_orders_.push_back(static_cast<int>(cls.size()));
            }
        }
    }

    map.table_.resize(domain.size());
    const double eps_rel = 1e-6;
    for (std::size_t k = 0; k < domain.size(); ++k) {
        const double T = domain.component(k).period();
        map.table_[k].resize(grid);
        num::parallel_for(grid, [&](std::size_t i) {
            const double t = T * static_cast<double>(i) / static_cast<double>(grid);
            // the involution is regular at light points of the opposite sign
            bool near_light = false;
            for (const auto& lp : map.lights_) {
                if (lp.component != k || lp.sign != sign) continue;
                double d = std::abs(t - wrap_period(lp.t, T));
                d = std::min(d, T - d);
                if (d < eps_rel * T) near_light = true;
            }
            InvolutionMap::Entry e;
            if (near_light) {
                // one-sided limit from above; across order-3 points the two
                // one-sided limits genuinely differ and the node is exceptional
                try {
                    auto res = trace_null(domain, {k, wrap_period(t + 4.0 * eps_rel * T, T)}, sign, cfg);
                    if (res.outcome == HitOutcome::Hit) e = {true, res.target};
                } catch (const Error&) {
                }
            } else {
                try {
                    auto res = trace_null(domain, {k, t}, sign, cfg);
                    if (res.outcome == HitOutcome::Hit) e = {true, res.target};
                } catch (const Error&) {
                }
            }
            map.table_[k][i] = e;
        });
    }
    return map;
}

std::vector<BoundaryPoint> equivalence_class(const Domain& domain, int sign, BoundaryPoint p,
                                             std::size_t max_size, const TraceConfig& cfg) {
    std::vector<BoundaryPoint> cls{p};
    std::vector<std::size_t> frontier{0};
    auto same = [&](const BoundaryPoint& a, const BoundaryPoint& b) {
        if (a.component != b.component) return false;
        const double T = domain.component(a.component).period();
        double d = std::abs(wrap_period(a.t, T) - wrap_period(b.t, T));
        d = std::min(d, T - d);
        return d < 1e-7 * T;
    };
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t idx : frontier) {
            const BoundaryPoint q = cls[idx];
            const Vec2 pos = domain.component(q.component).position(q.t);
            for (const auto& tgt : chord_targets(domain, pos, sign, cfg)) {
                bool known = false;
                for (const auto& existing : cls) {
                    if (same(existing, tgt)) {
                        known = true;
                        break;
                    }
                }
                if (!known) {
                    cls.push_back(tgt);
                    next.push_back(cls.size() - 1);
                    if (cls.size() > max_size) {
                        throw Error("equivalence_class: class size exceeds configured bound");
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(cls.begin(), cls.end(), [&](const BoundaryPoint& a, const BoundaryPoint& b) {
        if (a.component != b.component) return a.component < b.component;
        const double T = domain.component(a.component).period();
        return wrap_period(a.t, T) < wrap_period(b.t, T);
    });
    return cls;
}

double disk_oracle(int sign, double theta) {
    return wrap_pm_pi(sign < 0 ? 0.5 * pi - theta : -0.5 * pi - theta);
}

AnnulusPoint annulus_oracle(double r1, double r2, int sign, AnnulusPoint p) {
    if (!(r1 > 0.0) || !(r2 > r1)) throw GeometryError("annulus_oracle: need 0 < r1 < r2");
    const double ratio = r1 / r2;
    // reference angle: pi/4 for E_-, -pi/4 for E_+
    const double ref = sign < 0 ? 0.25 * pi : -0.25 * pi;

    if (!p.outer) {
        const double u = wrap_pm_pi(p.angle - ref);
        const double sgn = u >= 0.0 ? 1.0 : -1.0;
        // branch fixed by the r1 -> r2 limit (theta_in <-> theta_out)
        return {true, wrap_pm_pi(ref + sgn * std::acos(ratio * std::cos(u)))};
    }
    const double v = wrap_pm_pi(p.angle - ref);
    const double cv = std::cos(v);
    if (std::abs(std::abs(cv) - ratio) < 1e-12) {
        throw GeometryError("annulus_oracle: point is in an order-3 class (branch undefined)");
    }
    if (std::abs(cv) > ratio) {
        // fold arcs around the light points: outer <-> outer reflection
        return {true, wrap_pm_pi(sign < 0 ? 0.5 * pi - p.angle : -0.5 * pi - p.angle)};
    }
    const double sgn = v >= 0.0 ? 1.0 : -1.0;
    return {false, wrap_pm_pi(ref + sgn * std::acos(cv / ratio))};
}

} // namespace wavrel::chars
