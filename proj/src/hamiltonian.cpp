#include "wavrel/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "wavrel/numerics.hpp"

namespace wavrel::ham {

using num::pi;
using num::two_pi;

namespace {

double wrap_02pi(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    return a;
}

double field_scale(const CircleField& u) {
    double s = 1e-30;
    for (double v : u.phi) s = std::max(s, std::abs(v));
    for (double v : u.phi_n) s = std::max(s, std::abs(v));
    return s;
}

double nearest_light_dist(double theta) {
    double best = two_pi;
    for (double a : light_angles) {
        double d = std::abs(wrap_02pi(theta) - a);
        d = std::min(d, two_pi - d);
        best = std::min(best, d);
    }
    return best;
}

void require_grid(const CircleField& u) {
    if (u.phi.size() < 256 || u.phi.size() != u.phi_n.size() || !num::is_pow2(u.phi.size())) {
        throw Error("circle field: need matching power-of-two grids, at least 256 points");
    }
}

} // namespace

double hamiltonian_H(const CircleField& u) {
    require_grid(u);
    const std::size_t M = u.grid();
    const auto dphi = num::deriv_periodic(u.phi, two_pi);
    std::vector<double> integrand(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double th = two_pi * static_cast<double>(i) / M;
        integrand[i] = 0.5 * std::cos(2.0 * th) *
                       (u.phi_n[i] * u.phi_n[i] + dphi[i] * dphi[i]);
    }
    return num::quad_periodic(integrand, two_pi);
}

std::array<double, 4> c0_residuals(const CircleField& u) {
    require_grid(u);
    const std::size_t M = u.grid();
    const auto dphi = num::deriv_periodic(u.phi, two_pi);
    const auto dphin = num::deriv_periodic(u.phi_n, two_pi);
    std::vector<double> diff(M);
    for (std::size_t i = 0; i < M; ++i) diff[i] = dphin[i] - dphi[i];
    num::TrigInterp interp(diff, two_pi);
    std::array<double, 4> res{};
    for (std::size_t k = 0; k < 4; ++k) res[k] = std::abs(interp(light_angles[k]));
    return res;
}

CircleField ham_vector(const CircleField& u, double c0_tol) {
    require_grid(u);
    const auto res = c0_residuals(u);
    const double scale = field_scale(u);
    for (double r : res) {
        if (r > c0_tol * scale) {
            throw Error("ham_vector: field violates the C0 constraint (residual " +
                        std::to_string(r / scale) + ")");
        }
    }
    const std::size_t M = u.grid();
    const auto dphi = num::deriv_periodic(u.phi, two_pi);
    const auto dphin = num::deriv_periodic(u.phi_n, two_pi);

    std::vector<double> inner(M); // sin(2t) phi_n + cos(2t) d phi
    for (std::size_t i = 0; i < M; ++i) {
        const double th = two_pi * static_cast<double>(i) / M;
        inner[i] = std::sin(2.0 * th) * u.phi_n[i] + std::cos(2.0 * th) * dphi[i];
    }
    const auto dinner = num::deriv_periodic(inner, two_pi);

    std::vector<double> numer(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double th = two_pi * static_cast<double>(i) / M;
        numer[i] = std::sin(2.0 * th) * dphin[i] + dinner[i];
    }
    const auto dnumer = num::deriv_periodic(numer, two_pi);
    num::TrigInterp dnumer_interp(dnumer, two_pi);

    CircleField out;
    out.phi = u.phi_n;
    out.phi_n.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double th = two_pi * static_cast<double>(i) / M;
        if (nearest_light_dist(th) < 1e-9) {
            // l'Hopital: numer / cos(2t) -> numer' / (-2 sin(2t))
            out.phi_n[i] = dnumer_interp(th) / (-2.0 * std::sin(2.0 * th));
        } else {
            out.phi_n[i] = numer[i] / std::cos(2.0 * th);
        }
    }
    return out;
}

namespace {

// zero out modes above M/4: repeated applications of the vector field move
// round-off into the high modes, which would otherwise swamp the jets
void dealias(CircleField& u) {
    const std::size_t M = u.grid();
    for (auto* chan : {&u.phi, &u.phi_n}) {
        auto spec = num::rfft(*chan);
        for (std::size_t j = 0; j < M; ++j) {
            const std::size_t k = j <= M / 2 ? j : M - j;
            if (k > M / 4) spec[j] = 0.0;
        }
        *chan = num::irfft(std::move(spec));
    }
}

std::vector<double> reference_floors(std::size_t M, std::size_t k_max) {
    // relative residuals reached by the trace of the exact solution sqrt(2)x
    CircleField ref;
    ref.phi.resize(M);
    ref.phi_n.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double t = two_pi * static_cast<double>(i) / M;
        ref.phi[i] = std::sqrt(2.0) * std::cos(t);
        ref.phi_n[i] = ref.phi[i];
    }
    std::vector<double> floors;
    for (std::size_t k = 0; k <= k_max; ++k) {
        const auto res = c0_residuals(ref);
        double worst = 0.0;
        for (double r : res) worst = std::max(worst, r);
        floors.push_back(worst / field_scale(ref));
        if (k == k_max) break;
        try {
            ref = ham_vector(ref, 1e300);
            dealias(ref);
        } catch (const Error&) {
            break;
        }
    }
    return floors;
}

} // namespace

ConstraintDiagnostic constraint_chain(const CircleField& u, std::size_t k_max, double tol) {
    ConstraintDiagnostic diag;
    const auto floors = reference_floors(u.grid(), k_max);
    CircleField cur = u;
    bool alive = true;
    for (std::size_t k = 0; k <= k_max; ++k) {
        ConstraintDiagnostic::Level lvl;
        lvl.scale = field_scale(cur);
        lvl.residuals = c0_residuals(cur);
        lvl.noise_floor = k < floors.size() ? floors[k] : floors.back();
        const double cut = std::max(tol, 30.0 * lvl.noise_floor) * lvl.scale;
        lvl.pass = true;
        for (double r : lvl.residuals) lvl.pass = lvl.pass && r < cut;
        diag.levels.push_back(lvl);
        if (lvl.pass && alive) {
            diag.deepest_pass = k + 1;
        } else {
            alive = false;
        }
        if (k == k_max) break;
        // descend regardless; deeper residuals are diagnostic data
        try {
            cur = ham_vector(cur, 1e300);
            dealias(cur);
        } catch (const Error&) {
            break;
        }
    }
    return diag;
}

CircleForms circle_forms(const CircleField& u) {
    require_grid(u);
    const std::size_t M = u.grid();
    const auto dphi = num::deriv_periodic(u.phi, two_pi);
    CircleForms f;
    f.alpha.resize(M);
    f.beta.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double th = two_pi * static_cast<double>(i) / M;
        const double s2 = std::sin(2.0 * th), c2 = std::cos(2.0 * th);
        f.alpha[i] = -0.5 * (-(1.0 - s2) * dphi[i] - c2 * u.phi_n[i]);
        f.beta[i] = 0.5 * ((1.0 + s2) * dphi[i] - c2 * u.phi_n[i]);
    }
    return f;
}

XiMembership c_xi_membership(const CircleField& u, double xi) {
    if (!(xi > 0.0)) throw Error("c_xi_membership: xi must be positive");
    const auto forms = circle_forms(u);
    XiMembership out;
    out.theta0 = std::acos(std::exp(-xi));
    num::TrigInterp ia(forms.alpha, two_pi), ib(forms.beta, two_pi);

    double scale_a = 1e-30, scale_b = 1e-30;
    for (double v : forms.alpha) scale_a = std::max(scale_a, std::abs(v));
    for (double v : forms.beta) scale_b = std::max(scale_b, std::abs(v));

    // alpha is E_--invariant on U_-(xi) iff alpha(pi/2 - t) = -alpha(t) there
    for (double center : {0.25 * pi, 1.25 * pi}) {
        for (int i = 1; i < 64; ++i) {
            const double s = out.theta0 * (static_cast<double>(i) / 64.0);
            const double t = center + s;
            out.alpha_residual =
                std::max(out.alpha_residual, std::abs(ia(t) + ia(0.5 * pi - t)));
        }
    }
    for (double center : {-0.25 * pi, 0.75 * pi}) {
        for (int i = 1; i < 64; ++i) {
            const double s = out.theta0 * (static_cast<double>(i) / 64.0);
            const double t = center + s;
            out.beta_residual =
                std::max(out.beta_residual, std::abs(ib(t) + ib(-0.5 * pi - t)));
        }
    }
    // a vanishing channel is trivially invariant: normalize by the joint scale
    const double scale = std::max({scale_a, scale_b, 1e-14});
    out.alpha_residual /= scale;
    out.beta_residual /= scale;
    return out;
}

namespace {

// wound chord feet on the unit circle for an interior point at angle theta on
// the circle of radius rbar: the minus-characteristic foot (against alpha)
// and the plus-characteristic foot (against beta)
double foot_minus(double theta, double rbar) {
    const double w = wrap_02pi(theta - 0.25 * pi);
    const double A = std::acos(std::clamp(rbar * std::cos(w), -1.0, 1.0));
    return 0.25 * pi + (w <= pi ? A : two_pi - A);
}

double foot_plus(double theta, double rbar) {
    const double w = wrap_02pi(theta + 0.25 * pi);
    const double A = std::acos(std::clamp(rbar * std::cos(w), -1.0, 1.0));
    return -0.25 * pi + (w <= pi ? A : two_pi - A);
}

} // namespace

CircleField reduced_flow_neg(const CircleField& u, double xi, double membership_tol) {
    require_grid(u);
    if (!(xi > 0.0)) throw Error("reduced_flow_neg: xi must be positive");
    const auto mem = c_xi_membership(u, xi);
    if (std::max(mem.alpha_residual, mem.beta_residual) > membership_tol) {
        throw Error("reduced_flow_neg: field is outside C(-xi) (residuals " +
                    std::to_string(mem.alpha_residual) + ", " +
                    std::to_string(mem.beta_residual) + ")");
    }

    const std::size_t M = u.grid();
    const double rbar = std::exp(-xi);
    const auto forms = circle_forms(u);
    num::TrigInterp ia(forms.alpha, two_pi), ib(forms.beta, two_pi);
    const auto cum_a = num::integrate_periodic(forms.alpha, two_pi);
    const auto cum_b = num::integrate_periodic(forms.beta, two_pi);
    num::TrigInterp ica(cum_a.values, two_pi), icb(cum_b.values, two_pi);
    num::TrigInterp iphi(u.phi, two_pi);

    auto Fhat = [&](double tau) { return ica(wrap_02pi(tau)) + cum_a.mean * wrap_02pi(tau); };
    auto Ghat = [&](double tau) { return icb(wrap_02pi(tau)) + cum_b.mean * wrap_02pi(tau); };

    // constant from the outer-circle identity phi = F + G + C
    const double t_star = 1.0;
    const double C = iphi(t_star) - Fhat(t_star) - Ghat(t_star);

    // pointwise d(phi_in)/d theta and phi_n via the characteristic pullbacks
    std::vector<double> dphi_in(M), phin_in(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double th = two_pi * static_cast<double>(i) / M;
        const double tm = foot_minus(th, rbar);
        const double tp = foot_plus(th, rbar);
        const double wm = th - 0.25 * pi;
        const double wp = th + 0.25 * pi;
        const double denom_m = std::sqrt(std::max(1e-300, 1.0 - rbar * rbar * std::cos(wm) * std::cos(wm)));
        const double denom_p = std::sqrt(std::max(1e-300, 1.0 - rbar * rbar * std::cos(wp) * std::cos(wp)));
        const double dtm = rbar * std::abs(std::sin(wm)) / denom_m;
        const double dtp = rbar * std::abs(std::sin(wp)) / denom_p;
        dphi_in[i] = ia(tm) * dtm + ib(tp) * dtp;
        // d tau / d sigma transport for the xi-derivative channel
        const double sm = std::sin(tm - 0.25 * pi);
        const double sp = std::sin(tp + 0.25 * pi);
        phin_in[i] = -ia(tm) * rbar * std::cos(wm) / sm - ib(tp) * rbar * std::cos(wp) / sp;
    }

    const auto cum_in = num::integrate_periodic(dphi_in, two_pi);
    // the inner trace of a solution closes up; a leftover mean is numerical
    const double closure = std::abs(cum_in.mean) * two_pi;
    if (closure > 1e-4 * std::max(1.0, field_scale(u))) {
        throw Error("reduced_flow_neg: inner trace fails to close (residual " +
                    std::to_string(closure) + ")");
    }
    // anchor the constant at a regular angle
    const double anchor_val =
        Fhat(wrap_02pi(foot_minus(t_star, rbar))) + Ghat(wrap_02pi(foot_plus(t_star, rbar))) + C;
    num::TrigInterp icum_in(cum_in.values, two_pi);
    const double offset = anchor_val - icum_in(t_star);

    CircleField out;
    out.phi.resize(M);
    out.phi_n = std::move(phin_in);
    for (std::size_t i = 0; i < M; ++i) out.phi[i] = cum_in.values[i] + offset;
    return out;
}

std::vector<CircleField> c_xi_kernel_basis(double xi, std::size_t modes_per_arc, std::size_t M) {
    if (!(xi > 0.0)) throw Error("c_xi_kernel_basis: xi must be positive");
    const double theta0 = std::acos(std::exp(-xi));
    std::vector<CircleField> basis;

    struct ArcSpec {
        double center;
        bool is_alpha;
    };
    const ArcSpec arcs[4] = {{0.25 * pi, true},
                             {1.25 * pi, true},
                             {-0.25 * pi, false},
                             {0.75 * pi, false}};

    for (const auto& arc : arcs) {
        for (std::size_t k = 1; k <= modes_per_arc; ++k) {
            // odd window profile about the arc center: E-invariant density
            auto profile = [&, k](double s) {
                if (std::abs(s) >= theta0) return 0.0;
                const double z = (s + theta0) / (2.0 * theta0);
                return num::bump_smooth(z) * std::sin(pi * static_cast<double>(k) * s / theta0);
            };
            std::vector<double> alpha(M, 0.0), beta(M, 0.0);
            auto& dens = arc.is_alpha ? alpha : beta;
            for (std::size_t i = 0; i < M; ++i) {
                const double th = two_pi * static_cast<double>(i) / M;
                double s = wrap_02pi(th - arc.center);
                if (s > pi) s -= two_pi;
                dens[i] = profile(s);
            }
            // reconstruct (phi, phi_n); the cotangent ratio at the arc center
            // is the analytic limit of an odd/odd quotient
            std::vector<double> dphi(M), phin(M);
            for (std::size_t i = 0; i < M; ++i) dphi[i] = alpha[i] + beta[i];
            const auto cum = num::integrate_periodic(dphi, two_pi);
            for (std::size_t i = 0; i < M; ++i) {
                const double th = two_pi * static_cast<double>(i) / M;
                double pm, pp;
                const double um = th - 0.25 * pi;
                const double up = th + 0.25 * pi;
                if (nearest_light_dist(th) < 1e-9) {
                    // only the matching channel is supported here; the limit
                    // of cot(s) * profile(s) is profile'(0)
                    const double dprof = num::bump_smooth(0.5) * pi * static_cast<double>(k) / theta0;
                    pm = arc.is_alpha && std::abs(std::cos(th - arc.center) - 1.0) < 1e-9 ? dprof : 0.0;
                    pp = !arc.is_alpha && std::abs(std::cos(th - arc.center) - 1.0) < 1e-9 ? dprof : 0.0;
                } else {
                    pm = alpha[i] / std::tan(um);
                    pp = beta[i] / std::tan(up);
                }
                phin[i] = -(pm + pp);
            }
            CircleField u;
            u.phi = cum.values;
            u.phi_n = std::move(phin);
            // anchor condition phi(pi/4) + int_{pi/4}^{pi/4+theta0} alpha = 0,
            // with the arc integral from the spectral antiderivative of alpha
            num::TrigInterp icum(cum.values, two_pi);
            const auto cum_alpha = num::integrate_periodic(alpha, two_pi);
            num::TrigInterp ica(cum_alpha.values, two_pi);
            const double arc_int = (ica(0.25 * pi + theta0) + cum_alpha.mean * (0.25 * pi + theta0)) -
                                   (ica(0.25 * pi) + cum_alpha.mean * 0.25 * pi);
            const double shift = -(icum(0.25 * pi) + arc_int);
            for (auto& v : u.phi) v += shift;
            basis.push_back(std::move(u));
        }
    }
    return basis;
}

double circle_omega(const CircleField& u, const CircleField& w) {
    require_grid(u);
    if (u.grid() != w.grid()) throw Error("circle_omega: grid mismatch");
    const std::size_t M = u.grid();
    const auto dphi_u = num::deriv_periodic(u.phi, two_pi);
    const auto dphi_w = num::deriv_periodic(w.phi, two_pi);
    std::vector<double> integrand(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double th = two_pi * static_cast<double>(i) / M;
        const double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);
        integrand[i] = c2 * (u.phi_n[i] * w.phi[i] - w.phi_n[i] * u.phi[i]) -
                       s2 * (dphi_u[i] * w.phi[i] - dphi_w[i] * u.phi[i]);
    }
    return num::quad_periodic(integrand, two_pi);
}

double flow_composition_residual(const CircleField& u, double xi, double xi2,
                                 double membership_tol) {
    const CircleField direct = reduced_flow_neg(u, xi + xi2, membership_tol);
    const CircleField mid = reduced_flow_neg(u, xi, membership_tol);
    const CircleField composed = reduced_flow_neg(mid, xi2, membership_tol);
    double worst = 0.0;
    for (std::size_t i = 0; i < direct.grid(); ++i) {
        worst = std::max(worst, std::abs(direct.phi[i] - composed.phi[i]));
        worst = std::max(worst, std::abs(direct.phi_n[i] - composed.phi_n[i]));
    }
    return worst / field_scale(u);
}

} // namespace wavrel::ham
