#include "wavrel/dirichlet.hpp"

#include <algorithm>
#include <cmath>

#include "wavrel/numerics.hpp"

namespace wavrel::dirichlet {

using chars::BoundaryPoint;
using geom::Domain;
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

BoundaryPoint composed_step(const Domain& dom, BoundaryPoint p) {
    const auto mid = chars::trace_null(dom, p, -1).target;
    return chars::trace_null(dom, mid, +1).target;
}

} // namespace

OrbitRecord orbit(const Domain& dom, BoundaryPoint p, std::size_t n_iter, double orbit_tol_rel) {
    OrbitRecord rec;
    rec.start = p;
    const double T0 = dom.component(p.component).period();
    const double tol = orbit_tol_rel * T0;

    BoundaryPoint q = p;
    std::vector<std::size_t> bins(64, 0);
    double lifted = 0.0;
    double prev_step = 0.0;
    bool have_prev = false;
    double rot_half = 0.0;

    rec.iterates.reserve(std::min<std::size_t>(n_iter, 1 << 20));
    for (std::size_t i = 0; i < n_iter; ++i) {
        BoundaryPoint next = composed_step(dom, q);
        rec.iterates.push_back(next);
        if (next.component == p.component) {
            const double Tc = dom.component(next.component).period();
            bins[static_cast<std::size_t>(wrap_period(next.t, Tc) / Tc * 64.0) % 64]++;
            if (q.component == next.component) {
                // lift the displacement continuously: principal value, then
                // shifted to the branch nearest the previous step
                double d = wrap_period(next.t - q.t, Tc);
                if (d >= 0.5 * Tc) d -= Tc;
                if (have_prev) d += Tc * std::round((prev_step - d) / Tc);
                lifted += d;
                prev_step = d;
                have_prev = true;
            }
        }
        q = next;
        if (!rec.period && next.component == p.component && circ_dist(next.t, p.t, T0) < tol) {
            rec.period = i + 1;
            if (n_iter > 4 * (i + 1) && *rec.period <= 64) {
                // enough structure recorded; keep iterating for statistics
            }
        }
        if (i + 1 == n_iter / 2) {
            rot_half = lifted / (static_cast<double>(i + 1) * T0);
        }
    }

    const double rot = lifted / (static_cast<double>(n_iter) * T0);
    rec.rotation_estimate = rot - std::floor(rot);
    rec.rotation_converged = std::abs(rot - rot_half) < 1e-4;

    double disc = 0.0;
    for (std::size_t b = 0; b < 64; ++b) {
        disc = std::max(disc, std::abs(static_cast<double>(bins[b]) /
                                           static_cast<double>(rec.iterates.size()) -
                                       1.0 / 64.0));
    }
    rec.discrepancy = disc;
    return rec;
}

double existence_obstruction(const Domain& dom, const std::vector<std::vector<double>>& phi,
                             BoundaryPoint p, std::size_t n, double orbit_tol_rel) {
    std::vector<num::PeriodicCubic> interp;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        interp.emplace_back(phi[c], dom.component(c).period());
    }
    const double T0 = dom.component(p.component).period();

    BoundaryPoint q = p;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto mid = chars::trace_null(dom, q, -1).target;
        acc += interp[q.component](q.t) - interp[mid.component](mid.t);
        q = chars::trace_null(dom, mid, +1).target;
    }
    if (q.component != p.component || circ_dist(q.t, p.t, T0) > orbit_tol_rel * T0) {
        throw Error("existence_obstruction: point is not (E+E-)^n periodic");
    }
    return acc;
}

KernelField kernel_field(const Domain& dom, std::size_t component, double arc_lo, double arc_hi,
                         std::size_t n, const fields::FieldConfig& cfg) {
    const double T = dom.component(component).period();
    const double width = wrap_period(arc_hi - arc_lo, T);
    if (width <= 0.0) throw Error("kernel_field: empty arc");

    // periodicity of the arc
    for (int k = 0; k < 16; ++k) {
        const double t = arc_lo + width * (static_cast<double>(k) + 0.5) / 16.0;
        BoundaryPoint q{component, wrap_period(t, T)};
        for (std::size_t i = 0; i < n; ++i) q = composed_step(dom, q);
        if (q.component != component || circ_dist(q.t, t, T) > 1e-7 * T) {
            throw Error("kernel_field: arc is not (E+E-)^n periodic");
        }
    }

    auto psi = [=](std::size_t c, double t) {
        if (c != component) return 0.0;
        const double s = wrap_period(t - arc_lo, T);
        return s < width ? num::bump_smooth(s / width) : 0.0;
    };

    // f = sum_i psi(A^i x) + psi(A^i E_- x), A = E_- E_+; evaluations that
    // land exactly on a light parameter are nudged sideways (f is smooth and
    // the bumps live away from the light orbit)
    fields::BoundaryFn f([&dom, psi, n](std::size_t c, double t) {
        const double T = dom.component(c).period();
        for (int attempt = 0; attempt < 3; ++attempt) {
            try {
                double acc = 0.0;
                BoundaryPoint q{c, t};
                BoundaryPoint qe = chars::trace_null(dom, q, -1).target;
                for (std::size_t i = 0; i < n; ++i) {
                    acc += psi(q.component, q.t) + psi(qe.component, qe.t);
                    if (i + 1 < n) {
                        q = chars::trace_null(dom, chars::trace_null(dom, q, +1).target, -1).target;
                        qe = chars::trace_null(dom, chars::trace_null(dom, qe, +1).target, -1)
                                 .target;
                    }
                }
                return acc;
            } catch (const Error&) {
                t = wrap_period(t + 3e-7 * T, T);
            }
        }
        throw Error("kernel_field: repeated light-like encounters along the bump orbit");
    });

    KernelField out;
    fields::FieldConfig cfg2 = cfg;
    cfg2.validate_invariance = false;
    fields::BoundaryFn neg_f([&f](std::size_t c, double t) { return -f(c, t); });
    out.field = fields::make_L_field(dom, f, neg_f, cfg2);
    // the construction forces phi = f + (-f) = 0 up to roundoff
    for (auto& comp : out.field.phi) {
        for (auto& v : comp) {
            if (std::abs(v) > 1e-12) throw Error("kernel_field: phi trace is not zero");
            v = 0.0;
        }
    }

    // report simultaneous invariance residuals
    auto residual = [&](int sign) {
        double worst = 0.0;
        for (std::size_t c = 0; c < dom.size(); ++c) {
            const double Tc = dom.component(c).period();
            for (int i = 0; i < 64; ++i) {
                const double t = Tc * (static_cast<double>(i) + 0.31) / 64.0;
                try {
                    const auto q = chars::trace_null(dom, {c, t}, sign).target;
                    worst = std::max(worst, std::abs(f(q.component, q.t) - f(c, t)));
                } catch (const Error&) {
                }
            }
        }
        return worst;
    };
    out.invariance_residual_minus = residual(-1);
    out.invariance_residual_plus = residual(+1);
    return out;
}

RotationEstimate rotation_number(const Domain& dom, std::size_t component, std::size_t n_iter) {
    const double T = dom.component(component).period();
    BoundaryPoint q{component, 0.1 * T};
    double lifted = 0.0, prev = 0.0;
    bool have_prev = false;
    double half = 0.0;
    for (std::size_t i = 0; i < n_iter; ++i) {
        const BoundaryPoint next = composed_step(dom, q);
        if (next.component != component) {
            throw Error("rotation_number: orbit leaves the component");
        }
        double d = wrap_period(next.t - q.t, T);
        if (d >= 0.5 * T) d -= T;
        if (have_prev) d += T * std::round((prev - d) / T);
        lifted += d;
        prev = d;
        have_prev = true;
        q = next;
        if (i + 1 == n_iter / 2) half = lifted / (static_cast<double>(i + 1) * T);
    }
    RotationEstimate est;
    const double rho = lifted / (static_cast<double>(n_iter) * T);
    est.value = rho - std::floor(rho);
    est.delta = std::abs(rho - half);
    est.converged = est.delta < 1e-4;
    return est;
}

} // namespace wavrel::dirichlet
