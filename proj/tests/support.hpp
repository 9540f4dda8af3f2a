#pragma once

#include <algorithm>
#include <cmath>
#include <array>
#include <initializer_list>
#include <random>
#include <vector>

#include "gfsl/oscillator.hpp"

namespace support {

using gfsl::cplx;

// Random polynomial of degree <= 6 times a Gaussian with 0.5 <= Re w <= 2.
inline gfsl::GaussPolyFunction random_gauss_poly(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1.0, 1.0), wr(0.5, 2.0);
    std::uniform_int_distribution<int> deg(0, 6);
    std::vector<cplx> p(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& v : p) v = cplx(c(rng), c(rng));
    return {p, cplx(wr(rng), c(rng))};
}

// Normwise relative gap between two sequences over n in [lo, hi].
inline double seq_gap(const std::vector<cplx>& a, const std::vector<cplx>& b, int lo, int hi) {
    double num = 0.0, den = 0.0;
    for (int n = lo; n <= hi; ++n) {
        num = std::max(num, std::abs(a[n] - b[n]));
        den = std::max(den, std::max(std::abs(a[n]), std::abs(b[n])));
    }
    return den > 0.0 ? num / den : num;
}

struct OscillatorResidual {
    double ladder = 0.0;
    double generator = 0.0;
};

// Intertwining of x, d/dx and x d/dx + 1/2 with the ladder model, n < n_max.
inline OscillatorResidual oscillator_residual(const gfsl::GaussPolyFunction& u, int n_max) {
    using namespace gfsl;
    const int M = n_max + 1;
    CoeffVector tp = t_plus(u, M), tm = t_minus(u, M);
    CoeffVector tpx = t_plus(u.times_x(), M), tpd = t_plus(u.derivative(), M), tpe = t_plus(u.euler(), M);
    CoeffVector tmx = t_minus(u.times_x(), M), tmd = t_minus(u.derivative(), M), tme = t_minus(u.euler(), M);
    CoeffVector r1(M + 1), r2(M + 1), r3(M + 1), r4(M + 1), r5(M + 1), r6(M + 1);
    for (int n = 0; n <= M; ++n) {
        double sn = std::sqrt(double(n)), sn1 = std::sqrt(double(n + 1));
        r1[n] = n > 0 ? sn * tp[n - 1] : 0.0;
        r2[n] = n < M ? sn1 * tp[n + 1] : 0.0;
        r3[n] = n < M ? sn1 * tm[n + 1] : 0.0;
        r4[n] = n > 0 ? -sn * tm[n - 1] : 0.0;
        r5[n] = (n + 0.5) * tp[n];
        r6[n] = -(n + 0.5) * tm[n];
    }
    OscillatorResidual r;
    r.ladder = std::max({seq_gap(tpx, r1, 0, n_max), seq_gap(tpd, r2, 0, n_max), seq_gap(tmx, r3, 0, n_max),
                         seq_gap(tmd, r4, 0, n_max)});
    r.generator = std::max(seq_gap(tpe, r5, 0, n_max), seq_gap(tme, r6, 0, n_max));
    return r;
}

}  // namespace support

namespace support {

// Dormand-Prince 5(4) with absolute-plus-relative error control.
template <std::size_t D, class F>
std::array<cplx, D> dopri5(F&& f, std::array<cplx, D> y, double t1, double tol) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    using V = std::array<cplx, D>;
    auto axpy = [](const V& y0, std::initializer_list<std::pair<double, const V*>> terms, double h) {
        V r = y0;
        for (auto& [c, v] : terms)
            for (std::size_t i = 0; i < D; ++i) r[i] += h * c * (*v)[i];
        return r;
    };
    double t = 0.0, h = 1e-3;
    V k1 = f(t, y);
    while (t < t1) {
        if (t + h > t1) h = t1 - t;
        V k2 = f(t + c2 * h, axpy(y, {{a21, &k1}}, h));
        V k3 = f(t + c3 * h, axpy(y, {{a31, &k1}, {a32, &k2}}, h));
        V k4 = f(t + c4 * h, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
        V k5 = f(t + c5 * h, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
        V k6 = f(t + h, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
        V yn = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
        V k7 = f(t + h, yn);
        double err = 0.0;
        for (std::size_t i = 0; i < D; ++i) {
            cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(yn[i])));
            err = std::max(err, std::abs(e) / sc);
        }
        if (err <= 1.0) {
            t += h;
            y = yn;
            k1 = k7;
        }
        h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    }
    return y;
}

// <psi_kout | e^{tau X} psi_kin> for the spherical model, psi_k = e^{ik theta}/sqrt(2 pi),
// by transporting along the characteristics theta' = cos theta, z' = b sin(theta) z.
// Returns the matrix indexed [kout + kmax][kin + kmax].
inline std::vector<std::vector<cplx>> characteristics_correlations(cplx b, double tau, int kmax, int nodes) {
    std::vector<std::vector<cplx>> out(2 * kmax + 1, std::vector<cplx>(2 * kmax + 1, 0.0));
    const double pi = 3.14159265358979323846;
    for (int j = 0; j < nodes; ++j) {
        double th = 2.0 * pi * j / nodes;
        auto rhs = [b](double, const std::array<cplx, 2>& y) {
            return std::array<cplx, 2>{std::cos(y[0]), b * std::sin(y[0]) * y[1]};
        };
        auto y = dopri5<2>(rhs, {cplx(th), cplx(1.0)}, tau, 1e-13);
        for (int ko = -kmax; ko <= kmax; ++ko)
            for (int ki = -kmax; ki <= kmax; ++ki)
                out[ko + kmax][ki + kmax] += std::exp(cplx(0.0, -ko * th)) * std::exp(cplx(0.0, 1.0) * double(ki) * y[0]) *
                                             y[1] / (2.0 * pi) * (2.0 * pi / nodes);
    }
    return out;
}

}  // namespace support
