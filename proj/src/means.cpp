#include "gfsl/means.hpp"

#include <algorithm>
#include <cmath>

#include "gfsl/errors.hpp"
#include "gfsl/parallel.hpp"

namespace gfsl {

cplx hc_coefficient(int m, double lambda) {
    if (m < 0) throw DomainError("hc_coefficient: m must be non-negative");
    cplx il(0.0, lambda);
    auto r = log_gamma_ratio(il - double(m), 0.5 + il - double(m));
    if (!r) return 0.0;
    double head = std::lgamma(m + 0.5) - std::lgamma(m + 1.0) - std::log(kPi);
    return std::exp(head + *r);
}

double hc_partial_sum(double lambda, double t, int M) {
    if (!(t > 0.0)) throw DomainError("hc_partial_sum: t must be positive");
    if (M < 0) throw DomainError("hc_partial_sum: M must be non-negative");
    cplx il(0.0, lambda);
    cplx acc = 0.0;
    for (int m = M; m >= 0; --m) {
        cplx e = std::exp(-2.0 * m * t);
        acc += e * (std::exp(-t * (0.5 - il)) * hc_coefficient(m, lambda) +
                    std::exp(-t * (0.5 + il)) * hc_coefficient(m, -lambda));
    }
    if (std::abs(acc.imag()) > 1e-12 * std::max(1.0, std::abs(acc.real())))
        throw ConsistencyError("hc_partial_sum: branches are not conjugate");
    return acc.real();
}

double w_plus_symbol_error(double lambda) {
    cplx v = std::sqrt(kPi) * std::exp(cplx(0.0, 0.25 * kPi)) * std::sqrt(lambda) * hc_coefficient(0, lambda);
    return std::abs(v - 1.0);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return v;
}

namespace {

// Linear least squares for fixed s; returns the residual norm squared.
double project(const std::vector<double>& t, const std::vector<double>& y, double omega, double s, double* a,
               double* b) {
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double e = std::exp(s * t[i]);
        double c = e * std::cos(omega * t[i]), d = e * std::sin(omega * t[i]);
        s11 += c * c;
        s12 += c * d;
        s22 += d * d;
        r1 += c * y[i];
        r2 += d * y[i];
    }
    double det = s11 * s22 - s12 * s12;
    double aa = 0.0, bb = 0.0;
    if (std::abs(det) > 1e-300) {
        aa = (r1 * s22 - r2 * s12) / det;
        bb = (s11 * r2 - s12 * r1) / det;
    }
    double res = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double e = std::exp(s * t[i]);
        double f = e * (aa * std::cos(omega * t[i]) + bb * std::sin(omega * t[i]));
        res += (y[i] - f) * (y[i] - f);
    }
    if (a) *a = aa;
    if (b) *b = bb;
    return res;
}

}  // namespace

DecayFit fit_oscillating_decay(const std::vector<double>& t, const std::vector<double>& y, double omega,
                               double s_min, double s_max) {
    if (t.size() != y.size() || t.size() < 4) throw DomainError("fit_oscillating_decay: need >= 4 samples");
    const double step = 0.01;
    double best_s = s_min, best = INFINITY;
    for (double s = s_min; s <= s_max + 1e-12; s += step) {
        double r = project(t, y, omega, s, nullptr, nullptr);
        if (r < best) {
            best = r;
            best_s = s;
        }
    }
    double lo = best_s - step, hi = best_s + step;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = project(t, y, omega, x1, nullptr, nullptr), f2 = project(t, y, omega, x2, nullptr, nullptr);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = project(t, y, omega, x1, nullptr, nullptr);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = project(t, y, omega, x2, nullptr, nullptr);
        }
    }
    DecayFit fit;
    fit.slope = 0.5 * (lo + hi);
    double res = project(t, y, omega, fit.slope, &fit.a, &fit.b);
    double norm = 0.0;
    for (double v : y) norm += v * v;
    fit.rel_residual = norm > 0.0 ? std::sqrt(res / norm) : 0.0;
    return fit;
}

WaveResidual wave_residual(double lambda, const std::vector<double>& t_grid, double h, double shift) {
    if (!(h > 0.0 && h <= 1e-3)) throw DomainError("wave_residual: step must satisfy 0 < h <= 1e-3");
    for (double t : t_grid)
        if (t < 2.0 - 1e-12 || t > 6.0 + 1e-12) throw DomainError("wave_residual: t_grid must lie in [2, 6]");
    if (t_grid.size() < 4) throw DomainError("wave_residual: need at least 4 grid points");

    // One panel count for every evaluation keeps the quadrature error smooth in t.
    double tmax = *std::max_element(t_grid.begin(), t_grid.end());
    long panels = 2 * legendre_conical_adaptive(lambda, tmax + h, 1e-13).panels;
    auto E = [&](double t) { return std::exp(0.5 * t) * legendre_conical_fixed(lambda, t, panels); };

    WaveResidual w;
    w.t = t_grid;
    w.r.assign(t_grid.size(), 0.0);
    double emax = 0.0;
    std::vector<double> e0(t_grid.size());
    parallel_for(static_cast<int>(t_grid.size()), [&](int i) {
        double t = t_grid[i];
        double em = E(t - h), ec = E(t), ep = E(t + h);
        e0[i] = ec;
        w.r[i] = (ep - 2.0 * ec + em) / (h * h) + (lambda * lambda + shift) * ec;
    });
    for (double v : e0) emax = std::max(emax, std::abs(v));
    w.noise_floor = 4.0 * 1e-15 * emax / (h * h);
    double rmax = 0.0;
    for (double v : w.r) rmax = std::max(rmax, std::abs(v));
    w.floor_limited = rmax < w.noise_floor;
    w.fit = fit_oscillating_decay(w.t, w.r, lambda);
    return w;
}

DecayFit ratner_decay(double lambda, const std::vector<double>& t_grid) {
    if (lambda < 0.5) throw DomainError("ratner_decay: needs lambda >= 1/2");
    for (double t : t_grid)
        if (t < 3.0 - 1e-12 || t > 8.0 + 1e-12) throw DomainError("ratner_decay: t_grid must lie in [3, 8]");
    std::vector<double> y(t_grid.size());
    parallel_for(static_cast<int>(t_grid.size()), [&](int i) { y[i] = legendre_conical(lambda, t_grid[i]); });
    return fit_oscillating_decay(t_grid, y, lambda);
}

}  // namespace gfsl
