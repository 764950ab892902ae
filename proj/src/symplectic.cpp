#include "wavrel/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include "wavrel/numerics.hpp"

namespace wavrel::symp {

using fields::BoundaryField;
using fields::BoundaryFn;
using fields::OneFormPair;
using geom::Affine;
using geom::Domain;
using geom::Vec2;
using num::pi;
using num::two_pi;

namespace {

// grid samples of mu*Gamma and mu*u needed by the pairing, built once per
// (domain, grid) and shared across fields
struct OmegaKernel {
    std::vector<std::vector<double>> mu_gamma;
    std::vector<std::vector<double>> mu_u;

    static OmegaKernel build(const Domain& dom, std::size_t M) {
        OmegaKernel k;
        k.mu_gamma.resize(dom.size());
        k.mu_u.resize(dom.size());
        for (std::size_t c = 0; c < dom.size(); ++c) {
            const double T = dom.component(c).period();
            k.mu_gamma[c].resize(M);
            k.mu_u[c].resize(M);
            for (std::size_t i = 0; i < M; ++i) {
                const auto bd = geom::boundary_data(dom, c, T * static_cast<double>(i) / M);
                k.mu_gamma[c][i] = bd.mu_dens * bd.gamma;
                k.mu_u[c][i] = bd.mu_dens * bd.u_coef;
            }
        }
        return k;
    }
};

// momentum density mu*(Gamma phi_n + u(phi)) of a field, per component
std::vector<std::vector<double>> momentum_density(const Domain& dom, const OmegaKernel& kern,
                                                  const BoundaryField& u) {
    std::vector<std::vector<double>> P(dom.size());
    const std::size_t M = u.grid();
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        const auto dphi = num::deriv_periodic(u.phi[c], T);
        P[c].resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            P[c][i] = kern.mu_gamma[c][i] * u.phi_n[c][i] + kern.mu_u[c][i] * dphi[i];
        }
    }
    return P;
}

std::vector<std::vector<double>> momentum_density(const Domain& dom, const BoundaryField& u) {
    return momentum_density(dom, OmegaKernel::build(dom, u.grid()), u);
}

double omega_from_momenta(const Domain& dom, const std::vector<std::vector<double>>& Pu,
                          const BoundaryField& u, const std::vector<std::vector<double>>& Pw,
                          const BoundaryField& w) {
    double acc = 0.0;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        const std::size_t M = u.phi[c].size();
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) s += Pu[c][i] * w.phi[c][i] - Pw[c][i] * u.phi[c][i];
        acc += s * T / static_cast<double>(M);
    }
    return acc;
}

double field_norm(const Domain& dom, const BoundaryField& u) {
    double acc = 0.0;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        const std::size_t M = u.phi[c].size();
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            s += u.phi[c][i] * u.phi[c][i] + u.phi_n[c][i] * u.phi_n[c][i];
        }
        acc += s * T / static_cast<double>(M);
    }
    return std::sqrt(acc);
}

int rank_with_threshold(const Eigen::MatrixXd& A, double rel_tol, double* sigma_max = nullptr,
                        std::vector<double>* spectrum = nullptr) {
    if (A.rows() == 0 || A.cols() == 0) return 0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    if (sigma_max) *sigma_max = smax;
    if (spectrum) spectrum->assign(sv.data(), sv.data() + sv.size());
    if (smax == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > rel_tol * smax) ++r;
    }
    return r;
}

// sample-space coordinate vector of a field, quadrature-weighted
Eigen::VectorXd field_vector(const Domain& dom, const BoundaryField& u) {
    const std::size_t M = u.grid();
    Eigen::VectorXd v(2 * dom.size() * M);
    std::size_t at = 0;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double w = std::sqrt(dom.component(c).period() / static_cast<double>(M));
        for (std::size_t i = 0; i < M; ++i) v(at++) = w * u.phi[c][i];
        for (std::size_t i = 0; i < M; ++i) v(at++) = w * u.phi_n[c][i];
    }
    return v;
}

} // namespace

double omega(const Domain& dom, const BoundaryField& u, const BoundaryField& w) {
    if (u.components() != dom.size() || w.components() != dom.size() || u.grid() != w.grid()) {
        throw Error("omega: field grids do not match the domain");
    }
    const auto Pu = momentum_density(dom, u);
    const auto Pw = momentum_density(dom, w);
    return omega_from_momenta(dom, Pu, u, Pw, w);
}

double isotropy_residual(const Domain& dom, const std::vector<BoundaryField>& basis) {
    if (basis.empty()) return 0.0;
    const auto kern = OmegaKernel::build(dom, basis[0].grid());
    std::vector<std::vector<std::vector<double>>> P;
    std::vector<double> norms;
    P.reserve(basis.size());
    for (const auto& b : basis) {
        P.push_back(momentum_density(dom, kern, b));
        norms.push_back(field_norm(dom, b));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            const double w = omega_from_momenta(dom, P[i], basis[i], P[j], basis[j]);
            worst = std::max(worst, std::abs(w) / std::max(1e-30, norms[i] * norms[j]));
        }
    }
    return worst;
}

std::vector<BoundaryField> fourier_test_basis(const Domain& dom, std::size_t K, std::size_t M) {
    std::vector<BoundaryField> basis;
    auto blank = [&] {
        BoundaryField u;
        u.phi.assign(dom.size(), std::vector<double>(M, 0.0));
        u.phi_n.assign(dom.size(), std::vector<double>(M, 0.0));
        return u;
    };
    for (std::size_t c = 0; c < dom.size(); ++c) {
        for (int channel = 0; channel < 2; ++channel) {
            for (std::size_t k = 0; k <= K; ++k) {
                for (int ph = 0; ph < (k == 0 ? 1 : 2); ++ph) {
                    BoundaryField u = blank();
                    auto& target = channel == 0 ? u.phi[c] : u.phi_n[c];
                    for (std::size_t i = 0; i < M; ++i) {
                        const double w = two_pi * static_cast<double>(k * i) / static_cast<double>(M);
                        target[i] = ph == 0 ? std::cos(w) : std::sin(w);
                    }
                    basis.push_back(std::move(u));
                }
            }
        }
    }
    return basis;
}

PairingMatrix pairing_matrix(const Domain& dom, std::size_t K, std::size_t M) {
    const auto basis = fourier_test_basis(dom, K, M);
    PairingMatrix pm;
    pm.K = K;
    pm.M = M;
    pm.components = dom.size();
    const std::size_t n = basis.size();
    pm.omega.resize(n, n);
    const auto kern = OmegaKernel::build(dom, M);
    std::vector<std::vector<std::vector<double>>> P;
    P.reserve(n);
    for (const auto& b : basis) P.push_back(momentum_density(dom, kern, b));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            pm.omega(i, j) = omega_from_momenta(dom, P[i], basis[i], P[j], basis[j]);
        }
    }
    pm.antisymmetry_residual = (pm.omega + pm.omega.transpose()).cwiseAbs().maxCoeff();
    return pm;
}

// --- invariant families ------------------------------------------------------

namespace {

Vec2 along_direction(int sign) {
    const double s = 1.0 / std::sqrt(2.0);
    return sign < 0 ? Vec2{-s, s} : Vec2{s, s};
}

double sigma_coord(int sign, Vec2 p) { return sign < 0 ? p.x + p.y : p.y - p.x; }
double sigma_coord_vel(int sign, Vec2 v) { return sign < 0 ? v.x + v.y : v.y - v.x; }

struct CircleData {
    Vec2 center;
    double radius;
    double c0; // sigma at the center
};

struct BandPiece {
    double lo = 0.0, hi = 0.0; // sigma range of the band
    std::size_t piece = 0;     // chord component index at this level
    std::size_t pieces = 1;
};

// piece index of a boundary point on the chord at its own sigma level
std::size_t piece_of(const std::vector<CircleData>& holes, int sign, Vec2 p, double sigma) {
    const Vec2 d = along_direction(sign);
    const double tau = geom::dot(p, d);
    struct Iv {
        double lo, hi;
    };
    std::vector<Iv> blocked;
    const double sqrt2 = std::sqrt(2.0);
    for (const auto& h : holes) {
        const double off = (h.c0 - sigma) / sqrt2;
        if (std::abs(off) >= h.radius) continue;
        const double hw = std::sqrt(h.radius * h.radius - off * off);
        const double tc = geom::dot(h.center, d);
        blocked.push_back({tc - hw, tc + hw});
    }
    std::sort(blocked.begin(), blocked.end(), [](const Iv& a, const Iv& b) { return a.lo < b.lo; });
    std::size_t idx = 0;
    const double fuzz = 1e-9;
    for (const auto& iv : blocked) {
        if (tau > iv.hi - fuzz) {
            ++idx;
        } else {
            break;
        }
    }
    return idx;
}

} // namespace

std::vector<BoundaryFn> invariant_family(const Domain& dom, int sign, std::size_t degree) {
    // global sigma range over the boundary; the sampled extremes are polished
    // by golden-section so the Chebyshev argument never clamps at the light
    // points (the extremes ARE the light points)
    double lo = 1e300, hi = -1e300;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const auto& comp = dom.component(c);
        const double T = comp.period();
        auto sig = [&](double t) { return sigma_coord(sign, comp.position(t)); };
        double t_lo = 0.0, t_hi = 0.0, s_lo = 1e300, s_hi = -1e300;
        for (int i = 0; i < 512; ++i) {
            const double t = T * i / 512.0;
            const double s = sig(t);
            if (s < s_lo) {
                s_lo = s;
                t_lo = t;
            }
            if (s > s_hi) {
                s_hi = s;
                t_hi = t;
            }
        }
        auto polish = [&](double t0, double dir) {
            double a = t0 - T / 512.0, b = t0 + T / 512.0;
            const double gr = 0.61803398874989484;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            for (int it = 0; it < 60; ++it) {
                if (dir * sig(x1) > dir * sig(x2)) {
                    b = x2;
                    x2 = x1;
                    x1 = b - gr * (b - a);
                } else {
                    a = x1;
                    x1 = x2;
                    x2 = a + gr * (b - a);
                }
            }
            return sig(0.5 * (a + b));
        };
        lo = std::min(lo, polish(t_lo, -1.0));
        hi = std::max(hi, polish(t_hi, +1.0));
    }
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo) * (1.0 + 1e-13);

    std::vector<BoundaryFn> fam;
    for (std::size_t k = 0; k <= degree; ++k) {
        const int kk = static_cast<int>(k);
        fam.emplace_back(
            [&dom, sign, kk, mid, half](std::size_t c, double t) {
                const double s = sigma_coord(sign, dom.component(c).position(t));
                return num::chebyshev(kk, (s - mid) / half);
            },
            [&dom, sign, kk, mid, half](std::size_t c, double t) {
                const auto& comp = dom.component(c);
                const double s = sigma_coord(sign, comp.position(t));
                const double ds = sigma_coord_vel(sign, comp.velocity(t));
                return num::chebyshev_deriv(kk, (s - mid) / half) * ds / half;
            },
            [&dom, sign, kk, mid, half](std::size_t c, double t) {
                const auto& comp = dom.component(c);
                const double s = sigma_coord(sign, comp.position(t));
                const double ds = sigma_coord_vel(sign, comp.velocity(t));
                const double dds = sigma_coord_vel(sign, comp.acceleration(t));
                const double x = (s - mid) / half;
                return num::chebyshev_second(kk, x) * ds * ds / (half * half) +
                       num::chebyshev_deriv(kk, x) * dds / half;
            });
    }

    // windowed band modes on the chord complex of all-circle domains
    bool all_circles = dom.size() >= 2;
    for (std::size_t c = 0; c < dom.size() && all_circles; ++c) {
        all_circles = dom.component(c).curve.kind() == geom::CurveKind::Circle &&
                      !dom.component(c).curve.has_transform();
    }
    if (all_circles) {
        std::vector<CircleData> holes;
        std::vector<double> breaks;
        const double sqrt2 = std::sqrt(2.0);
        for (std::size_t c = 0; c < dom.size(); ++c) {
            const auto& cu = dom.component(c).curve;
            CircleData cd{cu.center(), cu.radius(), sigma_coord(sign, cu.center())};
            breaks.push_back(cd.c0 - sqrt2 * cd.radius);
            breaks.push_back(cd.c0 + sqrt2 * cd.radius);
            if (c != dom.outer_index()) holes.push_back(cd);
        }
        std::sort(breaks.begin(), breaks.end());
        for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
            const double blo = breaks[b], bhi = breaks[b + 1];
            // bands too narrow for the sampling grid alias into junk columns;
            // the global modes cover the residual content there
            if (bhi - blo < 0.015 * (hi - lo)) continue;
            if (bhi < lo + 1e-12 || blo > hi - 1e-12) continue;
            // count pieces at the band midpoint via a probe on the outer circle
            const double s_mid = 0.5 * (blo + bhi);
            std::size_t npieces = 1;
            for (const auto& h : holes) {
                const double off = (h.c0 - s_mid) / sqrt2;
                if (std::abs(off) < h.radius) ++npieces;
            }
            // keep the windowed content overlapping the global band so no
            // frequency gap opens between the two parts of the family
            const std::size_t kmax = std::max<std::size_t>(4, degree > 4 ? degree - 4 : 0);
            for (std::size_t piece = 0; piece < npieces; ++piece) {
                for (std::size_t k = 0; k <= kmax; ++k) {
                    const int kk = static_cast<int>(k);
                    fam.emplace_back(
                        [&dom, sign, holes, blo, bhi, piece, kk](std::size_t c, double t) {
                            const Vec2 p = dom.component(c).position(t);
                            const double s = sigma_coord(sign, p);
                            const double z = (s - blo) / (bhi - blo);
                            if (z <= 0.0 || z >= 1.0) return 0.0;
                            if (piece_of(holes, sign, p, s) != piece) return 0.0;
                            return num::window_poly(z) * num::chebyshev(kk, 2.0 * z - 1.0);
                        },
                        [&dom, sign, holes, blo, bhi, piece, kk](std::size_t c, double t) {
                            const auto& comp = dom.component(c);
                            const Vec2 p = comp.position(t);
                            const double s = sigma_coord(sign, p);
                            const double z = (s - blo) / (bhi - blo);
                            if (z <= 0.0 || z >= 1.0) return 0.0;
                            if (piece_of(holes, sign, p, s) != piece) return 0.0;
                            const double dz = sigma_coord_vel(sign, comp.velocity(t)) / (bhi - blo);
                            return (num::window_poly_deriv(z) * num::chebyshev(kk, 2.0 * z - 1.0) +
                                    num::window_poly(z) * 2.0 *
                                        num::chebyshev_deriv(kk, 2.0 * z - 1.0)) *
                                   dz;
                        },
                        // light parameters sit at band ends, where the window
                        // vanishes to all orders
                        [](std::size_t, double) { return 0.0; });
                }
            }
        }
    }
    return fam;
}

// --- truncated reduction -----------------------------------------------------

namespace {

// rank of A from the eigenvalues of A^T A (fast for tall thin matrices; our
// spectra have >= 8 orders of separation, which survives the squaring)
int gram_rank(const Eigen::MatrixXd& A, double sigma_rel_tol) {
    if (A.cols() == 0) return 0;
    Eigen::MatrixXd G = A.transpose() * A;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double lmax = ev(ev.size() - 1);
    if (!(lmax > 0.0)) return 0;
    const double cut = std::max(sigma_rel_tol * sigma_rel_tol, 1e-13) * lmax;
    int r = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (ev(i) > cut) ++r;
    }
    return r;
}

} // namespace

DefectReport truncated_reduction(const Domain& dom, std::size_t K, std::size_t M,
                                 std::size_t family_margin) {
    DefectReport rep;
    rep.K = K;
    rep.M = M;

    // quadratures and field sampling run on an oversampled grid so the
    // windowed family modes stay resolved on domains with small holes; the
    // test space itself is the K-truncation and does not depend on this
    std::size_t Mq = std::max<std::size_t>(M, 4096);
    if (dom.size() > 2 && K + family_margin > 16) Mq = std::max<std::size_t>(Mq, 8192);
    fields::FieldConfig fcfg;
    fcfg.M = Mq;
    fcfg.validate_invariance = false; // families are invariant by construction

    const auto test = fourier_test_basis(dom, K, Mq);
    const auto fam_m = invariant_family(dom, -1, K + family_margin);
    const auto fam_p = invariant_family(dom, +1, K + family_margin);

    const BoundaryFn zero([](std::size_t, double) { return 0.0; },
                          [](std::size_t, double) { return 0.0; });

    auto normalize = [&](BoundaryField u) {
        const double n = field_norm(dom, u);
        if (n > 1e-14) {
            for (auto& comp : u.phi) {
                for (auto& v : comp) v /= n;
            }
            for (auto& comp : u.phi_n) {
                for (auto& v : comp) v /= n;
            }
        }
        return u;
    };
    const auto gg = fields::GridGeometry::build(dom, Mq);
    std::vector<BoundaryField> glob;
    for (const auto& f : fam_m) {
        glob.push_back(normalize(fields::make_L_field(dom, gg, f, zero, fcfg)));
    }
    for (const auto& g : fam_p) {
        glob.push_back(normalize(fields::make_L_field(dom, gg, zero, g, fcfg)));
    }

    std::vector<BoundaryField> holonomy;
    for (auto& h : fields::holonomy_fields(dom, fcfg)) holonomy.push_back(normalize(std::move(h)));

    // carrier-augmented test space
    std::vector<const BoundaryField*> tprime;
    for (const auto& e : test) tprime.push_back(&e);
    for (const auto& h : holonomy) tprime.push_back(&h);

    // pairing matrices W[i][j] = omega(t'_i, l_j)
    const auto kern = OmegaKernel::build(dom, Mq);
    std::vector<std::vector<std::vector<double>>> Pt, Pg, Ph;
    for (const auto* e : tprime) Pt.push_back(momentum_density(dom, kern, *e));
    for (const auto& l : glob) Pg.push_back(momentum_density(dom, kern, l));
    for (const auto& h : holonomy) Ph.push_back(momentum_density(dom, kern, h));

    const std::size_t nt = tprime.size();
    const std::size_t ng = glob.size();
    Eigen::MatrixXd Wg(nt, ng), Wfull(nt, ng + holonomy.size());
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < ng; ++j) {
            Wg(i, j) = omega_from_momenta(dom, Pt[i], *tprime[i], Pg[j], glob[j]);
            Wfull(i, j) = Wg(i, j);
        }
        for (std::size_t j = 0; j < holonomy.size(); ++j) {
            Wfull(i, ng + j) = omega_from_momenta(dom, Pt[i], *tprime[i], Ph[j], holonomy[j]);
        }
    }

    const double rel_tol = 1e-8;
    double smax = 0.0;
    const int rank_Wg = rank_with_threshold(Wg, rel_tol, &smax, &rep.spectrum);
    rep.threshold = rel_tol * smax;
    const int rank_Wfull = rank_with_threshold(Wfull, rel_tol);
    rep.dim_L_perp = static_cast<int>(nt) - rank_Wg;
    rep.dim_L_full_perp = static_cast<int>(nt) - rank_Wfull;

    // dim of the family spans inside the test space: dim(F cap T') =
    // rank(F) + rank(T') - rank([F T'])
    const std::size_t dim_vec = 2 * dom.size() * Mq;
    Eigen::MatrixXd F(dim_vec, ng), TP(dim_vec, nt), Ffull(dim_vec, ng + holonomy.size());
    for (std::size_t j = 0; j < ng; ++j) {
        F.col(j) = field_vector(dom, glob[j]);
        Ffull.col(j) = F.col(j);
    }
    for (std::size_t j = 0; j < holonomy.size(); ++j) {
        Ffull.col(ng + j) = field_vector(dom, holonomy[j]);
    }
    for (std::size_t i = 0; i < nt; ++i) TP.col(i) = field_vector(dom, *tprime[i]);

    auto intersect_dim = [&](const Eigen::MatrixXd& A) {
        Eigen::MatrixXd joint(dim_vec, A.cols() + TP.cols());
        joint << A, TP;
        const int ra = gram_rank(A, rel_tol);
        const int rt = gram_rank(TP, rel_tol);
        const int rj = gram_rank(joint, rel_tol);
        return ra + rt - rj;
    };
    rep.dim_L = intersect_dim(F);
    rep.dim_L_full = intersect_dim(Ffull);

    rep.defect = rep.dim_L_perp - rep.dim_L;
    rep.lagrangian_defect = rep.dim_L_full_perp - rep.dim_L_full;

    // isotropy sanity of the assembled family
    std::vector<BoundaryField> fam_all = glob;
    for (const auto& h : holonomy) fam_all.push_back(h);
    std::vector<BoundaryField> probe;
    for (std::size_t i = 0; i < fam_all.size(); i += std::max<std::size_t>(1, fam_all.size() / 12)) {
        probe.push_back(fam_all[i]);
    }
    rep.family_residual = isotropy_residual(dom, probe);
    rep.ill_conditioned = rep.family_residual > 1e-6;
    return rep;
}

PeriodVectors periods(const Domain& dom, const OneFormPair& pair) {
    PeriodVectors pv;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        pv.alpha.push_back(num::quad_periodic(pair.alpha[c], T));
        pv.beta.push_back(num::quad_periodic(pair.beta[c], T));
    }
    return pv;
}

// --- conformal maps ----------------------------------------------------------

Affine conformal_translation(Vec2 shift) {
    Affine a;
    a.shift = shift;
    return a;
}

Affine conformal_boost(double rapidity) {
    Affine a;
    const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
    a.m = {ch, sh, sh, ch};
    return a;
}

Affine conformal_scaling(double factor) {
    Affine a;
    a.m = {factor, 0.0, 0.0, factor};
    return a;
}

Affine compose(const Affine& o, const Affine& i) {
    Affine r;
    r.m = {o.m[0] * i.m[0] + o.m[1] * i.m[2], o.m[0] * i.m[1] + o.m[1] * i.m[3],
           o.m[2] * i.m[0] + o.m[3] * i.m[2], o.m[2] * i.m[1] + o.m[3] * i.m[3]};
    r.shift = o.apply(i.shift);
    return r;
}

bool is_minkowski_conformal(const Affine& a, double tol) {
    // M^T eta M = lambda eta with eta = diag(1,-1), lambda > 0
    const double e00 = a.m[0] * a.m[0] - a.m[2] * a.m[2];
    const double e11 = a.m[1] * a.m[1] - a.m[3] * a.m[3];
    const double e01 = a.m[0] * a.m[1] - a.m[2] * a.m[3];
    return std::abs(e00 + e11) < tol * (1.0 + std::abs(e00)) && std::abs(e01) < tol && e00 > 0.0;
}

std::pair<Domain, BoundaryField> conformal_push(const Affine& map, const Domain& dom,
                                                const BoundaryField& u) {
    if (!is_minkowski_conformal(map)) {
        throw Error("conformal_push: map is not an affine conformal transformation");
    }
    if (dom.metric().kind != geom::MetricKind::Minkowski) {
        throw Error("conformal_push: only Minkowski domains are transported");
    }
    std::vector<geom::ParamCurve> curves;
    for (std::size_t c = 0; c < dom.size(); ++c) {
        // push the oriented curve; orientation flags are recomputed afterwards
        curves.push_back(dom.component(c).curve.transformed(map));
    }
    Domain pushed = geom::make_domain_from_parts(curves, dom.outer_index(), dom.metric());

    // inverse-transpose for gradient transport
    const double det = map.det();
    const double mit[4] = {map.m[3] / det, -map.m[2] / det, -map.m[1] / det, map.m[0] / det};

    BoundaryField out;
    out.phi = u.phi;
    out.phi_n.resize(dom.size());
    const std::size_t M = u.grid();
    for (std::size_t c = 0; c < dom.size(); ++c) {
        const double T = dom.component(c).period();
        const auto dphi = num::deriv_periodic(u.phi[c], T);
        out.phi_n[c].resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            const double t = T * static_cast<double>(i) / M;
            const auto fr_old = geom::frame(dom.component(c), t);
            const Vec2 n_old{fr_old.tangent_unit.y, -fr_old.tangent_unit.x};
            const Vec2 grad = u.phi_n[c][i] * n_old + (dphi[i] / fr_old.v) * fr_old.tangent_unit;
            const Vec2 grad_new{mit[0] * grad.x + mit[1] * grad.y,
                                mit[2] * grad.x + mit[3] * grad.y};
            const auto fr_new = geom::frame(pushed.component(c), t);
            const Vec2 n_new{fr_new.tangent_unit.y, -fr_new.tangent_unit.x};
            out.phi_n[c][i] = geom::dot(grad_new, n_new);
        }
    }
    return {std::move(pushed), std::move(out)};
}

} // namespace wavrel::symp
