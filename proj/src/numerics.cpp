#include "wavrel/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace wavrel::num {

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw NumericsError("fft: size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& z : a) z /= static_cast<double>(n);
    }
}

std::vector<cplx> rfft(const std::vector<double>& x) {
    std::vector<cplx> a(x.begin(), x.end());
    fft(a, false);
    return a;
}

std::vector<double> irfft(std::vector<cplx> spec) {
    fft(spec, true);
    std::vector<double> out(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real();
    return out;
}

namespace {

// wavenumber k for spectral index j on an n-grid (standard FFT layout)
int wavenumber(std::size_t j, std::size_t n) {
    return (j <= n / 2) ? static_cast<int>(j) : static_cast<int>(j) - static_cast<int>(n);
}

std::vector<double> deriv_fd4(const std::vector<double>& x, double period) {
    const std::size_t n = x.size();
    const double h = period / static_cast<double>(n);
    std::vector<double> d(n);
    auto at = [&](std::ptrdiff_t i) { return x[(i % static_cast<std::ptrdiff_t>(n) + n) % n]; };
    for (std::size_t i = 0; i < n; ++i) {
        auto s = static_cast<std::ptrdiff_t>(i);
        d[i] = (-at(s + 2) + 8.0 * at(s + 1) - 8.0 * at(s - 1) + at(s - 2)) / (12.0 * h);
    }
    return d;
}

} // namespace

std::vector<double> deriv_periodic(const std::vector<double>& x, double period) {
    const std::size_t n = x.size();
    if (n < 4) throw NumericsError("deriv_periodic: grid too small");
    if (!is_pow2(n)) return deriv_fd4(x, period);
    std::vector<cplx> a = rfft(x);
    const double scale = two_pi / period;
    for (std::size_t j = 0; j < n; ++j) {
        int k = wavenumber(j, n);
        if (static_cast<std::size_t>(2 * std::abs(k)) == n) {
            a[j] = 0.0; // Nyquist mode has no well-defined derivative sign
        } else {
            a[j] *= cplx(0.0, k * scale);
        }
    }
    return irfft(std::move(a));
}

PeriodicIntegral integrate_periodic(const std::vector<double>& x, double period) {
    const std::size_t n = x.size();
    PeriodicIntegral out;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    out.mean = mean;
    if (is_pow2(n)) {
        std::vector<cplx> a = rfft(x);
        const double scale = two_pi / period;
        a[0] = 0.0;
        for (std::size_t j = 1; j < n; ++j) {
            int k = wavenumber(j, n);
            if (static_cast<std::size_t>(2 * std::abs(k)) == n) {
                a[j] = 0.0;
            } else {
                a[j] /= cplx(0.0, k * scale);
            }
        }
        out.values = irfft(std::move(a));
        const double f0 = out.values[0];
        for (auto& v : out.values) v -= f0;
    } else {
        // trapezoid cumulative of the de-meaned samples
        out.values.assign(n, 0.0);
        const double h = period / static_cast<double>(n);
        for (std::size_t i = 1; i < n; ++i) {
            out.values[i] = out.values[i - 1] + 0.5 * h * ((x[i - 1] - mean) + (x[i] - mean));
        }
    }
    return out;
}

double quad_periodic(const std::vector<double>& x, double period) {
    double s = 0.0;
    for (double v : x) s += v;
    return s * period / static_cast<double>(x.size());
}

TrigInterp::TrigInterp(const std::vector<double>& values, double period) : period_(period) {
    if (!is_pow2(values.size())) throw NumericsError("TrigInterp: grid must be a power of two");
    spec_ = rfft(values);
}

double TrigInterp::operator()(double t) const {
    const std::size_t n = spec_.size();
    const double w = two_pi / period_ * t;
    double acc = spec_[0].real();
    for (std::size_t j = 1; j < n / 2; ++j) {
        const cplx& c = spec_[j];
        acc += 2.0 * (c.real() * std::cos(j * w) - c.imag() * std::sin(j * w));
    }
    acc += spec_[n / 2].real() * std::cos(static_cast<double>(n / 2) * w);
    return acc / static_cast<double>(n);
}

double TrigInterp::deriv(double t) const {
    const std::size_t n = spec_.size();
    const double w0 = two_pi / period_;
    const double w = w0 * t;
    double acc = 0.0;
    for (std::size_t j = 1; j < n / 2; ++j) {
        const double kw = static_cast<double>(j) * w0;
        acc += 2.0 * kw * (-spec_[j].real() * std::sin(j * w) - spec_[j].imag() * std::cos(j * w));
    }
    return acc / static_cast<double>(n);
}

std::vector<double> sample_grid(std::size_t n, double period) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = period * static_cast<double>(i) / static_cast<double>(n);
    return t;
}

std::vector<double> deriv_interval(const std::vector<double>& x, double a, double b) {
    const std::size_t n = x.size();
    if (n < 9) throw NumericsError("deriv_interval: need at least 9 samples");
    const double h = (b - a) / static_cast<double>(n - 1);
    std::vector<double> d(n);
    // 8th-order centered stencil
    static const double c[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    for (std::size_t i = 4; i + 4 < n; ++i) {
        double acc = 0.0;
        for (int k = 1; k <= 4; ++k) acc += c[k - 1] * (x[i + k] - x[i - k]);
        d[i] = acc / h;
    }
    // one-sided 8th-order stencils for the first/last four points
    static const double fwd[5][9] = {
        {-761.0 / 280, 8.0, -14.0, 56.0 / 3, -35.0 / 2, 56.0 / 5, -14.0 / 3, 8.0 / 7, -1.0 / 8},
        {-1.0 / 8, -223.0 / 140, 7.0 / 2, -7.0 / 2, 35.0 / 12, -7.0 / 4, 7.0 / 10, -1.0 / 6, 1.0 / 56},
        {1.0 / 56, -2.0 / 7, -19.0 / 20, 2.0, -5.0 / 4, 2.0 / 3, -1.0 / 4, 2.0 / 35, -1.0 / 168},
        {-1.0 / 168, 1.0 / 14, -1.0 / 2, -9.0 / 20, 5.0 / 4, -1.0 / 2, 1.0 / 6, -1.0 / 28, 1.0 / 280},
        {0, 0, 0, 0, 0, 0, 0, 0, 0}};
    for (std::size_t i = 0; i < 4; ++i) {
        double acc = 0.0, accb = 0.0;
        for (int k = 0; k < 9; ++k) {
            acc += fwd[i][k] * x[k];
            accb += fwd[i][k] * x[n - 1 - k];
        }
        d[i] = acc / h;
        d[n - 1 - i] = -accb / h;
    }
    return d;
}

double quad_interval(const std::vector<double>& x, double a, double b) {
    const std::size_t n = x.size();
    if (n < 10) throw NumericsError("quad_interval: need at least 10 samples");
    const double h = (b - a) / static_cast<double>(n - 1);
    double s = 0.5 * (x[0] + x[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) s += x[i];
    // Euler-Maclaurin endpoint corrections through h^4 with one-sided
    // stencils for f' and f'''; order 6 overall
    static const double g[5] = {-245.0 / 1440.0, 462.0 / 1440.0, -336.0 / 1440.0,
                                146.0 / 1440.0, -27.0 / 1440.0};
    double corr = 0.0;
    for (int k = 0; k < 5; ++k) corr += g[k] * (x[k] + x[n - 1 - k]);
    return h * (s + corr);
}

std::vector<double> roots_periodic(const std::function<double(double)>& f, double period,
                                   std::size_t grid, double tol) {
    std::vector<double> roots;
    double prev_t = 0.0;
    double prev_v = f(0.0);
    for (std::size_t i = 1; i <= grid; ++i) {
        const double t = period * static_cast<double>(i) / static_cast<double>(grid);
        const double v = f(t);
        if (prev_v == 0.0) {
            roots.push_back(prev_t);
        } else if (prev_v * v < 0.0) {
            roots.push_back(bisect(f, prev_t, t, tol));
        }
        prev_t = t;
        prev_v = v;
    }
    return roots;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw NumericsError("bisect: no sign change in bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

PeriodicCubic::PeriodicCubic(std::vector<double> values, double period)
    : y_(std::move(values)), period_(period) {
    const std::size_t n = y_.size();
    if (n < 3) throw NumericsError("PeriodicCubic: need at least 3 samples");
    h_ = period_ / static_cast<double>(n);
    // cyclic tridiagonal system for the second derivatives (Sherman-Morrison)
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double yi = y_[i];
        const double yp = y_[(i + 1) % n];
        const double ym = y_[(i + n - 1) % n];
        rhs[i] = 6.0 * (yp - 2.0 * yi + ym) / (h_ * h_);
    }
    auto solve_tri = [&](std::vector<double> b) {
        // diag 4, off-diag 1, size n (cyclic handled by caller)
        std::vector<double> c(n, 1.0), d(n, 4.0), sol(n);
        // Thomas on open chain of length n with modified corners (gamma trick)
        const double gamma = -4.0;
        d[0] -= gamma;
        d[n - 1] -= 1.0 / gamma;
        std::vector<double> cp(n), dp(n);
        cp[0] = c[0] / d[0];
        dp[0] = b[0] / d[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = d[i] - cp[i - 1];
            cp[i] = c[i] / m;
            dp[i] = (b[i] - dp[i - 1]) / m;
        }
        sol[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) sol[i] = dp[i] - cp[i] * sol[i + 1];
        return sol;
    };
    std::vector<double> u(n, 0.0);
    u[0] = -4.0;
    u[n - 1] = 1.0;
    std::vector<double> x1 = solve_tri(rhs);
    std::vector<double> x2 = solve_tri(u);
    const double vy = x1[0] - x1[n - 1] / 4.0;
    const double vz = 1.0 + x2[0] - x2[n - 1] / 4.0;
    m_.resize(n);
    for (std::size_t i = 0; i < n; ++i) m_[i] = x1[i] - x2[i] * vy / vz;
}

double PeriodicCubic::operator()(double t) const {
    const std::size_t n = y_.size();
    double s = std::fmod(t, period_);
    if (s < 0) s += period_;
    auto i = static_cast<std::size_t>(s / h_);
    if (i >= n) i = n - 1;
    const double xl = static_cast<double>(i) * h_;
    const double A = (xl + h_ - s) / h_;
    const double B = 1.0 - A;
    const double yl = y_[i], yr = y_[(i + 1) % n];
    const double ml = m_[i], mr = m_[(i + 1) % n];
    return A * yl + B * yr + ((A * A * A - A) * ml + (B * B * B - B) * mr) * h_ * h_ / 6.0;
}

double PeriodicCubic::deriv(double t) const {
    const std::size_t n = y_.size();
    double s = std::fmod(t, period_);
    if (s < 0) s += period_;
    auto i = static_cast<std::size_t>(s / h_);
    if (i >= n) i = n - 1;
    const double xl = static_cast<double>(i) * h_;
    const double A = (xl + h_ - s) / h_;
    const double B = 1.0 - A;
    const double yl = y_[i], yr = y_[(i + 1) % n];
    const double ml = m_[i], mr = m_[(i + 1) % n];
    return (yr - yl) / h_ + ((3.0 * B * B - 1.0) * mr - (3.0 * A * A - 1.0) * ml) * h_ / 6.0;
}

double smoothstep5(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep5_deriv(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

double bump_quintic(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return s < 0.5 ? smoothstep5(2.0 * s) : smoothstep5(2.0 * (1.0 - s));
}

double bump_smooth(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(1.0 - 0.25 / (s * (1.0 - s)));
}

double bump_smooth_deriv(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double w = s * (1.0 - s);
    return bump_smooth(s) * 0.25 * (1.0 - 2.0 * s) / (w * w);
}

double window_poly(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double w = 4.0 * s * (1.0 - s);
    const double w2 = w * w;
    const double w4 = w2 * w2;
    return w4 * w4;
}

double window_poly_deriv(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double w = 4.0 * s * (1.0 - s);
    const double w2 = w * w;
    const double w3 = w2 * w;
    return 8.0 * w3 * w3 * w * 4.0 * (1.0 - 2.0 * s);
}

double chebyshev(int k, double x) {
    x = std::clamp(x, -1.0, 1.0);
    return std::cos(k * std::acos(x));
}

double chebyshev_deriv(int k, double x) {
    x = std::clamp(x, -1.0, 1.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    if (s < 1e-8) {
        // endpoint limit: T_k'(±1) = ±k^2 with sign (±1)^{k+1}
        const double sign = (x > 0.0) ? 1.0 : ((k % 2 == 0) ? -1.0 : 1.0);
        return sign * static_cast<double>(k) * static_cast<double>(k);
    }
    return k * std::sin(k * std::acos(x)) / s;
}

double chebyshev_second(int k, double x) {
    x = std::clamp(x, -1.0, 1.0);
    const double kk = static_cast<double>(k) * static_cast<double>(k);
    if (std::abs(x) > 1.0 - 1e-7) {
        const double limit = kk * (kk - 1.0) / 3.0;
        return (x > 0.0 || k % 2 == 0) ? limit : -limit;
    }
    return (x * chebyshev_deriv(k, x) - kk * chebyshev(k, x)) / (1.0 - x * x);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned threads = 1;
    if (const char* env = std::getenv("WAVREL_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 1) threads = static_cast<unsigned>(std::min<long>(v, 64));
    }
    if (threads <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::uint64_t Rng::next_u64() {
    std::uint64_t x = state_;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    state_ = x;
    return x;
}

double Rng::uniform(double lo, double hi) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

} // namespace wavrel::num
