#include "wavrel/misner.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "wavrel/numerics.hpp"

namespace wavrel::misner {

using num::two_pi;

namespace {

void require_grid(const MisnerField& u) {
    const std::size_t M = u.phi_in.size();
    if (M < 256 || u.phin_in.size() != M || u.phi_out.size() != M || u.phin_out.size() != M) {
        throw Error("misner field: need four aligned grids of at least 256 points");
    }
}

} // namespace

MisnerField misner_L(const std::function<double(double)>& g, std::size_t M) {
    std::vector<double> gs(M);
    for (std::size_t i = 0; i < M; ++i) gs[i] = g(two_pi * static_cast<double>(i) / M);
    return misner_L_samples(gs);
}

MisnerField misner_L_samples(const std::vector<double>& g) {
    MisnerField u;
    u.phi_in = g;
    u.phi_out = g;
    const auto dg = num::deriv_periodic(g, two_pi);
    u.phin_in.resize(g.size());
    u.phin_out = dg;
    for (std::size_t i = 0; i < g.size(); ++i) u.phin_in[i] = -dg[i];
    return u;
}

double misner_orth_residual(const MisnerField& u) {
    require_grid(u);
    const auto din = num::deriv_periodic(u.phi_in, two_pi);
    const auto dout = num::deriv_periodic(u.phi_out, two_pi);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.grid(); ++i) {
        worst = std::max(worst,
                         std::abs(din[i] - u.phin_in[i] - dout[i] - u.phin_out[i]));
    }
    return worst;
}

double misner_symplectic(const MisnerField& u, const MisnerField& w) {
    require_grid(u);
    if (u.grid() != w.grid()) throw Error("misner_symplectic: grid mismatch");
    std::vector<double> integrand(u.grid());
    for (std::size_t i = 0; i < u.grid(); ++i) {
        integrand[i] = u.phi_in[i] * w.phin_in[i] - w.phi_in[i] * u.phin_in[i] +
                       u.phi_out[i] * w.phin_out[i] - w.phi_out[i] * u.phin_out[i];
    }
    return num::quad_periodic(integrand, two_pi);
}

MisnerDefect misner_defect(std::size_t K, Half half, std::size_t M) {
    MisnerDefect rep;
    rep.K = K;
    rep.half = half;

    // Fourier test basis across the four channels
    struct Mode {
        int channel;
        std::size_t k;
        bool sine;
    };
    std::vector<Mode> modes;
    for (int ch = 0; ch < 4; ++ch) {
        for (std::size_t k = 0; k <= K; ++k) {
            modes.push_back({ch, k, false});
            if (k > 0) modes.push_back({ch, k, true});
        }
    }
    auto make_mode = [&](const Mode& m) {
        MisnerField u;
        u.phi_in.assign(M, 0.0);
        u.phin_in.assign(M, 0.0);
        u.phi_out.assign(M, 0.0);
        u.phin_out.assign(M, 0.0);
        std::vector<double>* chan[4] = {&u.phi_in, &u.phin_in, &u.phi_out, &u.phin_out};
        for (std::size_t i = 0; i < M; ++i) {
            const double w = two_pi * static_cast<double>(m.k * i) / static_cast<double>(M);
            (*chan[m.channel])[i] = m.sine ? std::sin(w) : std::cos(w);
        }
        return u;
    };

    // L basis from Fourier modes <= K; both halves of the cylinder carry
    // evolution relations of the same (g, -g', g, g') shape and are exposed
    // through the same block computation
    std::vector<MisnerField> lbasis;
    for (std::size_t k = 0; k <= K; ++k) {
        for (int ph = 0; ph < (k == 0 ? 1 : 2); ++ph) {
            std::vector<double> g(M);
            for (std::size_t i = 0; i < M; ++i) {
                const double w = two_pi * static_cast<double>(k * i) / static_cast<double>(M);
                g[i] = ph == 0 ? std::cos(w) : std::sin(w);
            }
            lbasis.push_back(misner_L_samples(g));
        }
    }

    const std::size_t nt = modes.size();
    const std::size_t nl = lbasis.size();
    Eigen::MatrixXd W(nt, nl);
    std::vector<MisnerField> test_fields;
    test_fields.reserve(nt);
    for (const auto& m : modes) test_fields.push_back(make_mode(m));
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < nl; ++j) {
            W(i, j) = misner_symplectic(test_fields[i], lbasis[j]);
        }
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(W);
    const auto& sv = svd.singularValues();
    rep.spectrum.assign(sv.data(), sv.data() + sv.size());
    const double smax = sv.size() ? sv(0) : 0.0;
    rep.threshold = 1e-8 * smax;
    int rank_W = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > rep.threshold) ++rank_W;
    }

    rep.dim_L = static_cast<int>(nl); // exact trig modes, manifestly independent
    rep.dim_L_perp = static_cast<int>(nt) - rank_W;
    rep.defect = rep.dim_L_perp - rep.dim_L;

    // kernel of the orthogonality functional within the truncation: pair the
    // functional against the Fourier modes of degree <= K
    Eigen::MatrixXd R(2 * K + 1, nt);
    std::vector<double> probe(M);
    for (std::size_t i = 0; i < nt; ++i) {
        const auto& f = test_fields[i];
        const auto din = num::deriv_periodic(f.phi_in, two_pi);
        const auto dout = num::deriv_periodic(f.phi_out, two_pi);
        std::vector<double> resid(M);
        for (std::size_t s = 0; s < M; ++s) {
            resid[s] = din[s] - f.phin_in[s] - dout[s] - f.phin_out[s];
        }
        std::size_t row = 0;
        for (std::size_t k = 0; k <= K; ++k) {
            for (int ph = 0; ph < (k == 0 ? 1 : 2); ++ph) {
                for (std::size_t s = 0; s < M; ++s) {
                    const double w = two_pi * static_cast<double>(k * s) / static_cast<double>(M);
                    probe[s] = (ph == 0 ? std::cos(w) : std::sin(w)) * resid[s];
                }
                R(row++, i) = num::quad_periodic(probe, two_pi);
            }
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svdR(R);
    const auto& svR = svdR.singularValues();
    int rank_R = 0;
    for (int i = 0; i < svR.size(); ++i) {
        if (svR(i) > 1e-8 * svR(0)) ++rank_R;
    }
    rep.functional_kernel_dim = static_cast<int>(nt) - rank_R;
    rep.rank_identity = rep.functional_kernel_dim == rep.dim_L_perp;
    return rep;
}

geom::Domain misner_domain() {
    return geom::make_domain(std::string("{\"metric\":\"misner\"}"));
}

} // namespace wavrel::misner
