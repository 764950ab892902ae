#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "wavrel/characteristics.hpp"
#include "wavrel/geometry.hpp"

namespace wavrel::misner {

// Boundary data on the Misner cylinder S^1 x [-1,1] with metric dx dy - y dx^2,
// transversal n = 2 d_y -+ d_x at the in/out circles.
struct MisnerField {
    std::vector<double> phi_in, phin_in, phi_out, phin_out;
    std::size_t grid() const { return phi_in.size(); }
};

// Evolution-relation element from a single circle function g:
// (g, -g', g, g') — the d_- constancy forces the F-part to a constant.
MisnerField misner_L(const std::function<double(double)>& g, std::size_t M = 512);
MisnerField misner_L_samples(const std::vector<double>& g);

// sup-norm of d_x phi_in - phin_in - d_x phi_out - phin_out, the membership
// functional of (L_glob)^perp.
double misner_orth_residual(const MisnerField& u);

// oint (phi_in psin_in - psi_in phin_in + phi_out psin_out - psi_out phin_out) dx.
double misner_symplectic(const MisnerField& u, const MisnerField& w);

enum class Half { Full, Lower, Upper };

// Rank certificate in the 4(2K+1)-dimensional Fourier truncation: the defect
// grows as 2(2K+1), certifying an isotropic but non-Lagrangian relation.
struct MisnerDefect {
    int dim_L = 0;
    int dim_L_perp = 0;
    int defect = 0;
    int functional_kernel_dim = 0; // kernel of the orthogonality functional
    bool rank_identity = false;    // dim_L_perp == functional kernel dimension
    std::vector<double> spectrum;
    double threshold = 0.0;
    std::size_t K = 0;
    Half half = Half::Full;
};

MisnerDefect misner_defect(std::size_t K, Half half = Half::Full, std::size_t M = 512);

// The fixed cylinder as a Domain (for null tracing through chars::trace_null).
geom::Domain misner_domain();

} // namespace wavrel::misner
