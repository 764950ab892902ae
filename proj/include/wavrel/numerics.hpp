#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

// Small numerical toolbox shared by all modules: periodic spectral calculus
// on uniform grids, interval quadrature/differentiation, root bracketing,
// interpolation and the fixed bump profiles used for holonomy forms.

namespace wavrel::num {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

using cplx = std::complex<double>;

struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool is_pow2(std::size_t n);

// In-place radix-2 complex FFT. Size must be a power of two.
void fft(std::vector<cplx>& a, bool inverse);

// Forward DFT of real samples; returns full complex spectrum (size n).
std::vector<cplx> rfft(const std::vector<double>& x);

std::vector<double> irfft(std::vector<cplx> spec);

// Derivative of a T-periodic function sampled on a uniform grid.
// Spectral (FFT) when the grid size is a power of two, 4th-order centered
// finite differences otherwise.
std::vector<double> deriv_periodic(const std::vector<double>& x, double period);

// Antiderivative of the zero-mean part, F(t_0)=0; the mean is returned
// separately so callers can decide how to treat a nonzero period.
struct PeriodicIntegral {
    std::vector<double> values; // cumulative of (x - mean)
    double mean = 0.0;          // (1/T)*integral x dt
};
PeriodicIntegral integrate_periodic(const std::vector<double>& x, double period);

// Trapezoid rule on the periodic uniform grid (spectrally accurate for
// smooth integrands).
double quad_periodic(const std::vector<double>& x, double period);

// Trigonometric interpolant of uniform periodic samples (power-of-two grid);
// evaluation is O(n) per call with the spectrum computed once.
class TrigInterp {
public:
    TrigInterp() = default;
    TrigInterp(const std::vector<double>& values, double period);
    double operator()(double t) const;
    double deriv(double t) const;

private:
    std::vector<cplx> spec_;
    double period_ = 0.0;
};

// Uniform-grid sampling helper: t_j = j*period/n.
std::vector<double> sample_grid(std::size_t n, double period);

// --- non-periodic uniform interval helpers (diamond edges) ---

// Derivative on a uniform grid over [a,b]; 8th-order centered stencils with
// shifted one-sided stencils near the ends.
std::vector<double> deriv_interval(const std::vector<double>& x, double a, double b);

// Gregory-corrected trapezoid quadrature (order 6) on a uniform grid.
double quad_interval(const std::vector<double>& x, double a, double b);

// --- root finding ---

// All roots of f on a period, located by sign bracketing on a uniform grid
// of `grid` cells followed by bisection to tolerance tol.
std::vector<double> roots_periodic(const std::function<double(double)>& f, double period,
                                   std::size_t grid, double tol);

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

// --- interpolation ---

// Periodic cubic spline through uniform samples (cyclic tridiagonal solve).
class PeriodicCubic {
public:
    PeriodicCubic() = default;
    PeriodicCubic(std::vector<double> values, double period);
    double operator()(double t) const;
    double deriv(double t) const;

private:
    std::vector<double> y_, m_; // values and second derivatives
    double period_ = 0.0;
    double h_ = 0.0;
};

// --- fixed profiles ---

// Quintic smoothstep q(0)=0, q(1)=1 with q', q'' vanishing at both ends.
double smoothstep5(double s);
double smoothstep5_deriv(double s);

// Piecewise-quintic bump on [0,1]: rises with smoothstep5 on [0,1/2], falls
// symmetrically; unit peak, C^2 when extended by zero.
double bump_quintic(double s);

// C-infinity bump exp(1 - 1/(4 s (1-s))) on (0,1), zero outside; unit peak.
double bump_smooth(double s);
double bump_smooth_deriv(double s);

// polynomial window (4 s (1-s))^8 on (0,1): vanishes to 8th order at the
// ends, so periodic trapezoid sums of windowed integrands converge like h^8
double window_poly(double s);
double window_poly_deriv(double s);

// Chebyshev polynomial T_k evaluated on a clamped argument.
double chebyshev(int k, double x);
double chebyshev_deriv(int k, double x);
double chebyshev_second(int k, double x);

// Classic 4th-order Runge-Kutta step for small state vectors.
template <typename State, typename Rhs>
State rk4_step(const State& y, double t, double dt, Rhs&& f) {
    State k1 = f(t, y);
    State k2 = f(t + 0.5 * dt, y + (0.5 * dt) * k1);
    State k3 = f(t + 0.5 * dt, y + (0.5 * dt) * k2);
    State k4 = f(t + dt, y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Chunked parallel loop over [0, n); thread count from the WAVREL_THREADS
// environment variable (default 1). Bodies write to disjoint slots, so the
// result is deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Deterministic xorshift-based RNG for seeded property sweeps.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next_u64();
    double uniform(double lo, double hi);

private:
    std::uint64_t state_;
};

} // namespace wavrel::num
