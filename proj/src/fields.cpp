#include "wavrel/fields.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "wavrel/numerics.hpp"

namespace wavrel::fields {

using geom::Domain;
using geom::Vec2;
using num::pi;
using num::two_pi;

namespace {

double wrap_period(double t, double T) {
    t = std::fmod(t, T);
    if (t < 0) t += T;
    return t;
}

double circ_dist(double a, double b, double T) {
    double d = std::abs(wrap_period(a, T) - wrap_period(b, T));
    return std::min(d, T - d);
}

// degree-5 extrapolation one step past six equally spaced values, nearest first
double extrap6(const double* v) {
    return 6.0 * v[0] - 15.0 * v[1] + 20.0 * v[2] - 15.0 * v[3] + 6.0 * v[4] - v[5];
}

// replace the marked nodes of a periodic sample vector by the average of the
// two one-sided extrapolations; returns the worst disagreement
double fill_singular_nodes(std::vector<double>& vals, const std::vector<bool>& singular) {
    const std::size_t n = vals.size();
    double worst = 0.0;
    std::vector<double> fixed = vals;
    for (std::size_t i = 0; i < n; ++i) {
        if (!singular[i]) continue;
        double lbuf[6], rbuf[6];
        for (std::size_t k = 0; k < 6; ++k) {
            lbuf[k] = vals[(i + n - 1 - k) % n];
            rbuf[k] = vals[(i + 1 + k) % n];
        }
        const double left = extrap6(lbuf);
        const double right = extrap6(rbuf);
        worst = std::max(worst, std::abs(left - right));
        fixed[i] = 0.5 * (left + right);
    }
    vals = std::move(fixed);
    return worst;
}

std::vector<double> sample_fn(const Domain& dom, const BoundaryFn& f, std::size_t c,
                              std::size_t M) {
    const double T = dom.component(c).period();
    std::vector<double> out(M);
    for (std::size_t i = 0; i < M; ++i) out[i] = f(c, T * static_cast<double>(i) / M);
    return out;
}

std::vector<double> sample_fn_deriv(const Domain& dom, const BoundaryFn& f, std::size_t c,
                                    std::size_t M) {
    const double T = dom.component(c).period();
    if (f.has_deriv()) {
        std::vector<double> out(M);
        for (std::size_t i = 0; i < M; ++i) out[i] = f.deriv(c, T * static_cast<double>(i) / M);
        return out;
    }
    return num::deriv_periodic(sample_fn(dom, f, c, M), T);
}

// subsampled invariance residual of a scalar function, via the tracer
double fn_invariance_residual(const Domain& dom, int sign, const BoundaryFn& f,
                              std::size_t probes) {
    double worst = 0.0;
    double scale = 1e-30;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        for (std::size_t i = 0; i < probes; ++i) {
            const double t = T * (static_cast<double>(i) + 0.37) / static_cast<double>(probes);
            scale = std::max(scale, std::abs(f(c, t)));
            try {
                const auto q = chars::trace_null(dom, {c, t}, sign).target;
                worst = std::max(worst, std::abs(f(q.component, q.t) - f(c, t)));
            } catch (const Error&) {
                // light-like or exceptional start: skip the probe
            }
        }
    }
    return worst / std::max(scale, 1e-30);
}

} // namespace

GridGeometry GridGeometry::build(const Domain& dom, std::size_t M) {
    GridGeometry g;
    g.lights = geom::light_points(dom);
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        g.periods.push_back(T);
        std::vector<geom::Frame> fr(M);
        for (std::size_t i = 0; i < M; ++i) {
            fr[i] = geom::frame(dom.component(c), T * static_cast<double>(i) / M);
        }
        g.frames.push_back(std::move(fr));
    }
    return g;
}

std::vector<std::vector<double>> project_invariant(const Domain& dom, int sign,
                                                   const BoundaryFn& h, const FieldConfig& cfg) {
    const auto lights = geom::light_points(dom);
    std::vector<std::vector<double>> out(dom.size());
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        std::vector<double> vals(cfg.M);
        std::vector<bool> bad(cfg.M, false);
        for (std::size_t i = 0; i < cfg.M; ++i) {
            const double t = T * static_cast<double>(i) / cfg.M;
            bool near_light = false;
            for (const auto& lp : lights) {
                if (lp.component == c && circ_dist(t, lp.t, T) < 16.0 * cfg.light_zone_rel * T) {
                    near_light = true;
                }
            }
            if (near_light) {
                bad[i] = true;
                vals[i] = 0.0;
                continue;
            }
            try {
                const auto q = chars::trace_null(dom, {c, t}, sign).target;
                vals[i] = 0.5 * (h(c, t) + h(q.component, q.t));
            } catch (const Error&) {
                bad[i] = true;
                vals[i] = 0.0;
            }
        }
        fill_singular_nodes(vals, bad);
        out[c] = std::move(vals);
    }
    return out;
}

BoundaryField make_L_field(const Domain& dom, const BoundaryFn& f, const BoundaryFn& g,
                           const FieldConfig& cfg) {
    const auto gg = GridGeometry::build(dom, cfg.M);
    return make_L_field(dom, gg, f, g, cfg);
}

BoundaryField make_L_field(const Domain& dom, const GridGeometry& gg, const BoundaryFn& f,
                           const BoundaryFn& g, const FieldConfig& cfg) {
    if (cfg.validate_invariance) {
        const double rf = fn_invariance_residual(dom, -1, f, 48);
        if (rf > cfg.invariance_tol) {
            throw Error("make_L_field: f is not E_- invariant (residual " + std::to_string(rf) + ")");
        }
        const double rg = fn_invariance_residual(dom, +1, g, 48);
        if (rg > cfg.invariance_tol) {
            throw Error("make_L_field: g is not E_+ invariant (residual " + std::to_string(rg) + ")");
        }
    }

    BoundaryField u;
    u.phi.resize(dom.size());
    u.phi_n.resize(dom.size());
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = gg.periods[c];
        const auto fs = sample_fn(dom, f, c, cfg.M);
        const auto gs = sample_fn(dom, g, c, cfg.M);
        const auto dfs = sample_fn_deriv(dom, f, c, cfg.M);
        const auto dgs = sample_fn_deriv(dom, g, c, cfg.M);

        std::vector<double> phi(cfg.M), pm(cfg.M), pp(cfg.M);
        std::vector<bool> sing_m(cfg.M, false), sing_p(cfg.M, false);
        for (std::size_t i = 0; i < cfg.M; ++i) {
            phi[i] = fs[i] + gs[i];
            const double t = T * static_cast<double>(i) / cfg.M;

            // distance to the nearest light point of each sign on this component
            double dist_m = T, dist_p = T;
            const geom::LightPoint* lp_m = nullptr;
            const geom::LightPoint* lp_p = nullptr;
            for (const auto& lp : gg.lights) {
                if (lp.component != c) continue;
                const double d = circ_dist(t, lp.t, T);
                if (lp.sign < 0 && d < dist_m) {
                    dist_m = d;
                    lp_m = &lp;
                }
                if (lp.sign > 0 && d < dist_p) {
                    dist_p = d;
                    lp_p = &lp;
                }
            }

            // P = cot(theta -+ pi/4) * derivative; at the exact light parameter
            // the limit is f''(t*) / (kappa v) since d(theta)/dt = kappa v
            auto channel = [&](const BoundaryFn& fn, const std::vector<double>& dsamp, double dist,
                               const geom::LightPoint* lp, double cot, std::vector<bool>& sing,
                               double& out) {
                if (fn.has_deriv() && fn.has_deriv2()) {
                    if (lp && dist < 1e-9 * T) {
                        const auto fr = geom::frame(dom.component(c), lp->t);
                        out = fn.deriv2(c, lp->t) / (fr.kappa * fr.v);
                    } else {
                        out = cot * fn.deriv(c, t);
                    }
                    return;
                }
                if (lp && dist < cfg.light_zone_rel * T) {
                    sing[i] = true;
                    out = 0.0;
                    return;
                }
                out = cot * dsamp[i];
            };
            const double th = gg.frames[c][i].theta;
            channel(f, dfs, dist_m, lp_m, 1.0 / std::tan(th - 0.25 * pi), sing_m, pm[i]);
            channel(g, dgs, dist_p, lp_p, 1.0 / std::tan(th + 0.25 * pi), sing_p, pp[i]);
        }
        double scale = 1.0;
        for (double v : phi) scale = std::max(scale, std::abs(v));
        const double worst =
            std::max(fill_singular_nodes(pm, sing_m), fill_singular_nodes(pp, sing_p));
        if (worst > cfg.onesided_tol * scale) {
            throw AssumptionCViolation(
                "make_L_field: one-sided limits disagree at a light point (residual " +
                std::to_string(worst) + ")");
        }
        std::vector<double> phin(cfg.M);
        for (std::size_t i = 0; i < cfg.M; ++i) {
            phin[i] = -(pm[i] + pp[i]) / gg.frames[c][i].v;
        }
        u.phi[c] = std::move(phi);
        u.phi_n[c] = std::move(phin);
    }
    return u;
}

OneFormPair rho(const Domain& dom, const BoundaryField& u) {
    const std::size_t M = u.grid();
    const auto gg = GridGeometry::build(dom, M);
    OneFormPair pair;
    pair.alpha.resize(dom.size());
    pair.beta.resize(dom.size());
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = gg.periods[c];
        const auto dphi = num::deriv_periodic(u.phi[c], T);
        std::vector<double> a(M), b(M);
        for (std::size_t i = 0; i < M; ++i) {
            const auto& fr = gg.frames[c][i];
            const double s2 = std::sin(2.0 * fr.theta);
            const double c2 = std::cos(2.0 * fr.theta);
            const double vpn = fr.v * u.phi_n[c][i];
            a[i] = -0.5 * (-(1.0 - s2) * dphi[i] - c2 * vpn);
            b[i] = 0.5 * ((1.0 + s2) * dphi[i] - c2 * vpn);
        }
        pair.alpha[c] = std::move(a);
        pair.beta[c] = std::move(b);
    }
    return pair;
}

BoundaryField rho_inverse(const Domain& dom, const OneFormPair& pair,
                          const std::vector<double>& anchors, const FieldConfig& cfg) {
    const std::size_t M = pair.alpha.empty() ? 0 : pair.alpha[0].size();
    if (M == 0) throw Error("rho_inverse: empty pair");
    if (anchors.size() != dom.size()) throw Error("rho_inverse: one anchor per component required");
    const auto gg = GridGeometry::build(dom, M);

    BoundaryField u;
    u.phi.resize(dom.size());
    u.phi_n.resize(dom.size());
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = gg.periods[c];
        std::vector<double> dphi(M);
        double scale = 1e-30;
        for (std::size_t i = 0; i < M; ++i) {
            dphi[i] = pair.alpha[c][i] + pair.beta[c][i];
            scale = std::max({scale, std::abs(pair.alpha[c][i]), std::abs(pair.beta[c][i])});
        }
        const auto cum = num::integrate_periodic(dphi, T);
        if (std::abs(cum.mean) * T > 1e-8 * std::max(1.0, scale * T)) {
            throw Error("rho_inverse: alpha + beta is not exact on component " + std::to_string(c));
        }
        std::vector<double> phi(M), pm(M), pp(M);
        std::vector<bool> sing_m(M, false), sing_p(M, false);
        for (std::size_t i = 0; i < M; ++i) {
            phi[i] = anchors[c] + cum.values[i];
            const double t = T * static_cast<double>(i) / M;
            for (const auto& lp : gg.lights) {
                if (lp.component != c) continue;
                if (circ_dist(t, lp.t, T) < cfg.light_zone_rel * T) {
                    if (lp.sign < 0) {
                        sing_m[i] = true;
                    } else {
                        sing_p[i] = true;
                    }
                }
            }
            const double th = gg.frames[c][i].theta;
            pm[i] = sing_m[i] ? 0.0 : 1.0 / std::tan(th - 0.25 * pi) * pair.alpha[c][i];
            pp[i] = sing_p[i] ? 0.0 : 1.0 / std::tan(th + 0.25 * pi) * pair.beta[c][i];
        }
        fill_singular_nodes(pm, sing_m);
        fill_singular_nodes(pp, sing_p);
        std::vector<double> phin(M);
        for (std::size_t i = 0; i < M; ++i) phin[i] = -(pm[i] + pp[i]) / gg.frames[c][i].v;
        u.phi[c] = std::move(phi);
        u.phi_n[c] = std::move(phin);
    }
    return u;
}

double form_invariance_residual(const Domain& dom, int sign,
                                const std::vector<std::vector<double>>& density,
                                std::size_t probes) {
    std::vector<num::TrigInterp> interp;
    std::vector<num::PeriodicCubic> cubic;
    const bool pow2 = num::is_pow2(density[0].size());
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        if (pow2) {
            interp.emplace_back(density[c], T);
        } else {
            cubic.emplace_back(density[c], T);
        }
    }
    auto eval = [&](std::size_t c, double t) { return pow2 ? interp[c](t) : cubic[c](t); };

    double worst = 0.0;
    double scale = 1e-30;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        for (std::size_t i = 0; i < probes; ++i) {
            const double t = T * (static_cast<double>(i) + 0.41) / static_cast<double>(probes);
            scale = std::max(scale, std::abs(eval(c, t)));
            try {
                const auto q = chars::trace_null(dom, {c, t}, sign).target;
                // derivative of the involution at t by central differences
                const double h = 1e-6 * T;
                const auto qp = chars::trace_null(dom, {c, wrap_period(t + h, T)}, sign).target;
                const auto qm = chars::trace_null(dom, {c, wrap_period(t - h, T)}, sign).target;
                if (qp.component != qm.component || qp.component != q.component) continue;
                const double Tq = dom.component(q.component).period();
                double dt = qp.t - qm.t;
                if (dt > 0.5 * Tq) dt -= Tq;
                if (dt < -0.5 * Tq) dt += Tq;
                const double deriv = dt / (2.0 * h);
                worst = std::max(worst, std::abs(eval(q.component, q.t) * deriv - eval(c, t)));
            } catch (const Error&) {
            }
        }
    }
    return worst / std::max(scale, 1e-30);
}

namespace {

// cumulative integral of a density channel with its per-component periods
struct CumulativeForm {
    std::vector<num::TrigInterp> smooth; // cumulative of the zero-mean part
    std::vector<double> period;          // full period integral per component
    std::vector<double> mean;
    std::vector<double> T;

    static CumulativeForm build(const Domain& dom, const std::vector<std::vector<double>>& dens) {
        CumulativeForm f;
        for (std::size_t c = 0; c < dom.size(); ++c) {
            const double Tc = dom.component(c).period();
            auto cum = num::integrate_periodic(dens[c], Tc);
            f.smooth.emplace_back(cum.values, Tc);
            f.period.push_back(cum.mean * Tc);
            f.mean.push_back(cum.mean);
            f.T.push_back(Tc);
        }
        return f;
    }

    // value at unwrapped parameter tau on component c
    double at(std::size_t c, double tau) const { return smooth[c](tau) + mean[c] * tau; }
};

// marches one polyline leg, tracking the chord foot of the given sign
class FootTracker {
public:
    FootTracker(const Domain& dom, const CumulativeForm& cum, int sign)
        : dom_(dom), cum_(cum), sign_(sign) {}

    void start(std::size_t component, double t) {
        comp_ = component;
        tau_ = t;
        acc_ = 0.0;
    }

    void advance_to(Vec2 p) {
        const auto feet = chars::trace_from_interior(dom_, p, sign_);
        // pick the foot continuing the tracked branch
        double best = 1e300;
        std::size_t bc = 0;
        double bt = 0.0;
        for (const auto& cand : {feet.first, feet.second}) {
            if (cand.component != comp_) continue;
            const double Tc = dom_.component(comp_).period();
            double d = cand.t - wrap_period(tau_, Tc);
            if (d > 0.5 * Tc) d -= Tc;
            if (d < -0.5 * Tc) d += Tc;
            if (std::abs(d) < best) {
                best = std::abs(d);
                bc = cand.component;
                bt = wrap_period(tau_, Tc) + d;
            }
        }
        if (best > 0.25 * dom_.component(comp_).period()) {
            throw Error("interior_value: path crosses a tangency chain (foot jump)");
        }
        const double Tc = dom_.component(comp_).period();
        const double tau_new = tau_ + (bt - wrap_period(tau_, Tc));
        acc_ += cum_.at(bc, tau_new) - cum_.at(comp_, tau_);
        tau_ = tau_new;
    }

    double accumulated() const { return acc_; }

private:
    const Domain& dom_;
    const CumulativeForm& cum_;
    int sign_;
    std::size_t comp_ = 0;
    double tau_ = 0.0; // unwrapped foot parameter
    double acc_ = 0.0;
};

double integrate_path(const Domain& dom, const CumulativeForm& ca, const CumulativeForm& cb,
                      const BasePoint& base, const std::vector<Vec2>& waypoints) {
    FootTracker fa(dom, ca, -1), fb(dom, cb, +1);
    fa.start(base.component, base.t);
    fb.start(base.component, base.t);
    Vec2 prev = dom.component(base.component).position(base.t);
    for (std::size_t leg = 0; leg < waypoints.size(); ++leg) {
        const Vec2 wp = waypoints[leg];
        const bool last_leg = leg + 1 == waypoints.size();
        const int steps = 192;
        for (int s = 1; s <= steps; ++s) {
            const double frac = static_cast<double>(s) / steps;
            const Vec2 q{prev.x + frac * (wp.x - prev.x), prev.y + frac * (wp.y - prev.y)};
            // the tail of the final leg may graze the boundary (boundary
            // targets); the chord feet stay well defined there
            if (!(last_leg && s > 0.95 * steps) && !dom.contains(q)) {
                throw Error("interior_value: path leaves the domain");
            }
            fa.advance_to(q);
            fb.advance_to(q);
        }
        prev = wp;
    }
    return fa.accumulated() + fb.accumulated();
}

} // namespace

double interior_value(const Domain& dom, const OneFormPair& pair, const BasePoint& base,
                      Vec2 target, double path_tol) {
    // precondition: the pair is (numerically) in im(rho|_L)
    const double ra = form_invariance_residual(dom, -1, pair.alpha, 48);
    const double rb = form_invariance_residual(dom, +1, pair.beta, 48);
    if (std::max(ra, rb) > 1e-6) {
        throw Error("interior_value: pair fails the E-invariance precondition");
    }

    const auto ca = CumulativeForm::build(dom, pair.alpha);
    const auto cb = CumulativeForm::build(dom, pair.beta);

    const Vec2 start = dom.component(base.component).position(base.t);
    const bool target_on_boundary = !dom.contains(target);

    auto run = [&](const std::vector<Vec2>& wps) {
        return base.phi + integrate_path(dom, ca, cb, base, wps);
    };

    // default straight path and a bent second path for the independence check
    const Vec2 mid{0.5 * (start.x + target.x), 0.5 * (start.y + target.y)};
    Vec2 offset{-(target.y - start.y), target.x - start.x};
    const double len = std::max(1e-12, geom::norm(offset));
    offset = (0.08 * dom.diameter() / len) * offset;
    Vec2 bent{mid.x + offset.x, mid.y + offset.y};
    if (!dom.contains(bent)) bent = {mid.x - offset.x, mid.y - offset.y};

    const double v1 = run({target});
    if (target_on_boundary) return v1;
    double v2 = v1;
    if (dom.contains(bent)) {
        v2 = run({bent, target});
        if (std::abs(v1 - v2) > path_tol) {
            throw Error("interior_value: path dependence detected (" + std::to_string(v1 - v2) + ")");
        }
    }
    return 0.5 * (v1 + v2);
}

namespace {

struct HolonomyArc {
    std::size_t component = 0;
    double t0 = 0.0;
    double width = 0.0;
};

// longest run of grid nodes on the hole whose chord image lies on the outer
// component, shrunk until a dense probe confirms the whole arc is clean
HolonomyArc find_arc(const Domain& dom, std::size_t hole, int sign) {
    const double T = dom.component(hole).period();
    const std::size_t n = 1024;
    std::vector<bool> ok(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = T * static_cast<double>(i) / n;
        try {
            const auto q = chars::trace_null(dom, {hole, t}, sign).target;
            ok[i] = q.component == dom.outer_index();
        } catch (const Error&) {
        }
    }
    // longest circular run
    std::size_t best_len = 0, best_start = 0, run = 0, start = 0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        if (ok[i % n]) {
            if (run == 0) start = i;
            ++run;
            if (run > best_len) {
                best_len = run;
                best_start = start;
            }
            if (run == 2 * n) break;
        } else {
            run = 0;
        }
    }
    if (best_len < 16) {
        throw Error("holonomy_basis: no arc with E image on the outer component (ordering "
                    "condition unsatisfiable)");
    }
    const double run_width = T * static_cast<double>(std::min(best_len, n)) / n;
    const double center =
        T * (static_cast<double>(best_start) + 0.5 * static_cast<double>(best_len)) / n;

    HolonomyArc arc;
    arc.component = hole;
    arc.width = std::min(0.1 * T, 0.5 * run_width);
    for (int attempt = 0; attempt < 5; ++attempt) {
        arc.t0 = wrap_period(center - 0.5 * arc.width, T);
        bool clean = true;
        for (int p = 0; p < 256 && clean; ++p) {
            const double t = wrap_period(arc.t0 + arc.width * (p + 0.5) / 256.0, T);
            try {
                clean = chars::trace_null(dom, {hole, t}, sign).target.component ==
                        dom.outer_index();
            } catch (const Error&) {
                clean = false;
            }
        }
        if (clean) return arc;
        arc.width *= 0.5;
    }
    throw Error("holonomy_basis: could not isolate a clean arc seeing the outer component");
}

// sample the bump density psi + E^* psi on the whole boundary
std::vector<std::vector<double>> bump_and_pullback(const Domain& dom, const HolonomyArc& arc,
                                                   int sign, std::size_t M, double amplitude,
                                                   bool smooth_profile) {
    std::vector<std::vector<double>> dens(dom.size());
    for (std::size_t c = 0; c < dom.size(); ++c) dens[c].assign(M, 0.0);

    const double T = dom.component(arc.component).period();
    auto psi = [&](double t) {
        const double s = wrap_period(t - arc.t0, T);
        if (s >= arc.width) return 0.0;
        const double z = s / arc.width;
        return (smooth_profile ? num::window_poly(z) : num::bump_quintic(z)) / arc.width;
    };
    // normalize the grid quadrature of psi to `amplitude`
    double raw = 0.0;
    for (std::size_t i = 0; i < M; ++i) raw += psi(T * static_cast<double>(i) / M);
    raw *= T / static_cast<double>(M);
    const double scale = amplitude / raw;

    for (std::size_t i = 0; i < M; ++i) {
        dens[arc.component][i] = scale * psi(T * static_cast<double>(i) / M);
    }

    // pullback E^* psi: supported where E maps into the arc
    chars::TraceConfig cfg;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double Tc = dom.component(c).period();
        for (std::size_t i = 0; i < M; ++i) {
            const double t = Tc * static_cast<double>(i) / M;
            try {
                const auto q = chars::trace_null(dom, {c, t}, sign, cfg).target;
                if (q.component != arc.component) continue;
                const double val = psi(q.t);
                if (val == 0.0) continue;
                // dE/dt by central differences
                const double h = 1e-6 * Tc;
                const auto qp = chars::trace_null(dom, {c, wrap_period(t + h, Tc)}, sign, cfg).target;
                const auto qm = chars::trace_null(dom, {c, wrap_period(t - h, Tc)}, sign, cfg).target;
                if (qp.component != arc.component || qm.component != arc.component) continue;
                double dt = qp.t - qm.t;
                if (dt > 0.5 * T) dt -= T;
                if (dt < -0.5 * T) dt += T;
                dens[c][i] += scale * val * dt / (2.0 * h);
            } catch (const Error&) {
            }
        }
    }
    return dens;
}

} // namespace

std::vector<OneFormPair> holonomy_basis(const Domain& dom, const FieldConfig& cfg) {
    std::vector<OneFormPair> out;
    if (dom.size() < 2) return out;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        if (c == dom.outer_index()) continue;
        const auto arc = find_arc(dom, c, -1);
        OneFormPair pair;
        pair.alpha = bump_and_pullback(dom, arc, -1, cfg.M, 1.0, false);
        pair.beta.assign(dom.size(), std::vector<double>(cfg.M, 0.0));
        out.push_back(std::move(pair));
    }
    return out;
}

std::vector<BoundaryField> holonomy_fields(const Domain& dom, const FieldConfig& cfg) {
    std::vector<BoundaryField> out;
    if (dom.size() < 2) return out;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        if (c == dom.outer_index()) continue;
        const auto arc_m = find_arc(dom, c, -1);
        const auto arc_p = find_arc(dom, c, +1);
        OneFormPair pair;
        // the C^7 profile keeps the omega pairings of these elements at the
        // quadrature floor; the public holonomy_basis keeps the quintic
        pair.alpha = bump_and_pullback(dom, arc_m, -1, cfg.M, 1.0, true);
        pair.beta = bump_and_pullback(dom, arc_p, +1, cfg.M, -1.0, true);
        std::vector<double> anchors(dom.size(), 0.0);
        out.push_back(rho_inverse(dom, pair, anchors, cfg));
    }
    return out;
}

void write_field_csv(std::ostream& os, const Domain& dom, const BoundaryField& u) {
    os << "# domain=" << geom::domain_hash(dom) << "\n";
    os << "component,t,phi,phi_n\n";
    os.precision(17);
    for (std::size_t c = 0; c < u.components(); ++c) {
        const double T = dom.component(c).period();
        const std::size_t M = u.phi[c].size();
        for (std::size_t i = 0; i < M; ++i) {
            os << c << ',' << T * static_cast<double>(i) / M << ',' << u.phi[c][i] << ','
               << u.phi_n[c][i] << "\n";
        }
    }
}

BoundaryField read_field_csv(std::istream& is, const std::string& expected_hash) {
    BoundaryField u;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("domain=");
            if (pos != std::string::npos && !expected_hash.empty()) {
                const std::string h = line.substr(pos + 7);
                if (h != expected_hash) {
                    throw Error("field file belongs to a different domain (hash mismatch)");
                }
            }
            continue;
        }
        if (line.rfind("component", 0) == 0 || line.rfind("t,", 0) == 0) continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> cols;
        while (std::getline(ls, tok, ',')) cols.push_back(std::stod(tok));
        std::size_t c = 0;
        double phi, phin;
        if (cols.size() == 4) {
            c = static_cast<std::size_t>(cols[0]);
            phi = cols[2];
            phin = cols[3];
        } else if (cols.size() == 3) {
            phi = cols[1];
            phin = cols[2];
        } else {
            throw Error("malformed field CSV line: " + line);
        }
        if (u.phi.size() <= c) {
            u.phi.resize(c + 1);
            u.phi_n.resize(c + 1);
        }
        u.phi[c].push_back(phi);
        u.phi_n[c].push_back(phin);
    }
    if (u.phi.empty()) throw Error("empty field CSV");
    return u;
}

void write_pair_csv(std::ostream& os, const Domain& dom, const OneFormPair& pair) {
    os << "# domain=" << geom::domain_hash(dom) << "\n";
    os << "component,t,alpha,beta\n";
    os.precision(17);
    for (std::size_t c = 0; c < pair.components(); ++c) {
        const double T = dom.component(c).period();
        const std::size_t M = pair.alpha[c].size();
        for (std::size_t i = 0; i < M; ++i) {
            os << c << ',' << T * static_cast<double>(i) / M << ',' << pair.alpha[c][i] << ','
               << pair.beta[c][i] << "\n";
        }
    }
}

} // namespace wavrel::fields
