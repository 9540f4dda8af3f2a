#include "gfsl/specfun.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gfsl/errors.hpp"

namespace gfsl {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

const double kLogPi = std::log(kPi);
const double kHalfLog2Pi = 0.5 * std::log(2.0 * kPi);

// Shift the imaginary part by a multiple of 2 pi so it lies closest to ref.
cplx align_branch(cplx v, double ref_im) {
    double k = std::round((ref_im - v.imag()) / (2.0 * kPi));
    return {v.real(), v.imag() + 2.0 * kPi * k};
}

cplx lanczos_log_gamma(cplx z) {
    cplx zm = z - 1.0;
    cplx x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (zm + double(i));
    cplx t = zm + kLanczosG + 0.5;
    cplx v = kHalfLog2Pi + (zm + 0.5) * std::log(t) - t + std::log(x);
    cplx stirling = (z - 0.5) * std::log(z) - z + kHalfLog2Pi;
    return align_branch(v, stirling.imag());
}

}  // namespace

bool is_gamma_pole(cplx z, long* n) {
    if (z.imag() != 0.0) return false;
    double r = z.real();
    if (r > 0.0 || r != std::floor(r)) return false;
    if (n) *n = static_cast<long>(-r);
    return true;
}

cplx log_sin_pi(cplx z) {
    double y = z.imag();
    if (std::abs(y) <= 5.0) return std::log(std::sin(kPi * z));
    if (y > 0.0) {
        cplx e = std::exp(2.0 * kPi * kI * z);
        return -kPi * kI * z + std::log(cplx(0.0, 0.5)) + std::log(1.0 - e);
    }
    cplx e = std::exp(-2.0 * kPi * kI * z);
    return kPi * kI * z + std::log(cplx(0.0, -0.5)) + std::log(1.0 - e);
}

cplx log_gamma(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("log_gamma: non-finite argument");
    if (is_gamma_pole(z)) throw PoleError("log_gamma: pole at " + std::to_string(z.real()));
    if (z.real() >= 0.5) return lanczos_log_gamma(z);

    cplx v = kLogPi - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
    // Branch from log Gamma(z) = log Gamma(z+m) - sum log(z+j).
    int m = static_cast<int>(std::ceil(0.5 - z.real()));
    double im = lanczos_log_gamma(z + double(m)).imag();
    for (int j = 0; j < m; ++j) im -= std::arg(z + double(j));
    return align_branch(v, im);
}

std::optional<cplx> log_gamma_ratio(cplx z, cplx w, PoleMode mode) {
    long p = 0, q = 0;
    bool zp = is_gamma_pole(z, &p);
    bool wp = is_gamma_pole(w, &q);
    if (zp && wp) {
        if (mode == PoleMode::Strict)
            throw DomainError("gamma ratio: both arguments are poles (limit mode not requested)");
        double lr = std::lgamma(double(q) + 1.0) - std::lgamma(double(p) + 1.0);
        return cplx(lr, ((p - q) % 2 != 0) ? kPi : 0.0);
    }
    if (zp) throw PoleError("gamma ratio: numerator at a pole");
    if (wp) return std::nullopt;

    cplx d = z - w;
    double m = std::round(d.real());
    double scale = std::max(1.0, std::abs(z) + std::abs(w));
    if (d - m == cplx(0.0) || std::abs(d - m) < 1e-15 * scale) {
        if (std::abs(m) <= 256.0) {
            cplx acc = 0.0;
            long mi = static_cast<long>(m);
            if (mi >= 0) {
                for (long j = 0; j < mi; ++j) acc += std::log(w + double(j));
            } else {
                for (long j = 0; j < -mi; ++j) acc -= std::log(z + double(j));
            }
            return acc;
        }
    }
    return log_gamma(z) - log_gamma(w);
}

cplx gamma_ratio(cplx z, cplx w, PoleMode mode) {
    auto l = log_gamma_ratio(z, w, mode);
    if (!l) return 0.0;
    return std::exp(*l);
}

std::vector<cplx> taylor_two_factor(cplx alpha, cplx beta, int n_max) {
    if (n_max < 0) throw DomainError("taylor_two_factor: n_max must be non-negative");
    std::vector<cplx> a(static_cast<std::size_t>(n_max) + 1);
    a[0] = 1.0;
    if (n_max == 0) return a;
    cplx c = kI * (alpha - beta);
    cplx s = alpha + beta;
    a[1] = c;
    for (int m = 1; m < n_max; ++m) {
        a[m + 1] = (c * a[m] + (s - double(m) + 1.0) * a[m - 1]) / double(m + 1);
        if (!std::isfinite(a[m + 1].real()) || !std::isfinite(a[m + 1].imag()))
            throw AccuracyError("taylor_two_factor: overflow at order " + std::to_string(m + 1),
                                double(m + 1));
    }
    return a;
}

cplx beta_line_integral(cplx alpha, cplx beta, PoleMode mode) {
    cplx num = -alpha - beta - 1.0;
    cplx ga = -alpha, gb = -beta;
    bool np = is_gamma_pole(num);
    bool ap = is_gamma_pole(ga);
    bool bp = is_gamma_pole(gb);
    cplx pref = std::exp(kLogPi + (alpha + beta + 2.0) * std::log(2.0));
    if (!np) {
        if (ap || bp) return 0.0;
        return pref * std::exp(log_gamma(num) - log_gamma(ga) - log_gamma(gb));
    }
    if (mode == PoleMode::Strict)
        throw DomainError("beta_line_integral: -alpha-beta-1 is a pole of Gamma");
    if (ap && bp) return 0.0;
    if (ap) return pref * gamma_ratio(num, ga, PoleMode::Limit) * std::exp(-log_gamma(gb));
    if (bp) return pref * gamma_ratio(num, gb, PoleMode::Limit) * std::exp(-log_gamma(ga));
    throw DomainError("beta_line_integral: divergent configuration with no cancelling pole");
}

namespace {

// Neumaier-compensated running sum.
struct CompSum {
    cplx sum = 0.0;
    cplx c = 0.0;
    void add(cplx v) {
        cplx t = sum + v;
        double cr = std::abs(sum.real()) >= std::abs(v.real()) ? (sum.real() - t.real()) + v.real()
                                                                : (v.real() - t.real()) + sum.real();
        double ci = std::abs(sum.imag()) >= std::abs(v.imag()) ? (sum.imag() - t.imag()) + v.imag()
                                                                : (v.imag() - t.imag()) + sum.imag();
        c += cplx(cr, ci);
        sum = t;
    }
    cplx value() const { return sum + c; }
};

// cosh t + sinh t cos(th) = e^t cos^2(th/2) + e^{-t} sin^2(th/2), free of cancellation near th = pi.
struct ConicalIntegrand {
    double ep, em;
    cplx nu;
    ConicalIntegrand(double lambda, double t) : ep(std::exp(t)), em(std::exp(-t)), nu(-0.5, lambda) {}
    cplx operator()(double th) const {
        double c = std::cos(0.5 * th), s = std::sin(0.5 * th);
        return std::exp(nu * std::log(ep * c * c + em * s * s));
    }
};

}  // namespace

double legendre_conical(double lambda, double t, double rel_tol) {
    return legendre_conical_adaptive(lambda, t, rel_tol).value;
}

ConicalQuadrature legendre_conical_adaptive(double lambda, double t, double rel_tol) {
    if (!(t >= 0.0)) throw DomainError("legendre_conical: t must be non-negative");
    if (t == 0.0) return {1.0, 1, 0.0};
    const ConicalIntegrand f(lambda, t);

    // Trapezoid on [0, pi] with halved endpoints; equals the periodic rule on [0, 2 pi].
    constexpr long kMaxPanels = 1L << 24;
    long n = 16;
    CompSum sum;
    sum.add(0.5 * (f(0.0) + f(kPi)));
    double mass = 0.5 * (std::abs(f(0.0)) + std::abs(f(kPi)));
    for (long j = 1; j < n; ++j) {
        cplx v = f(kPi * double(j) / double(n));
        sum.add(v);
        mass += std::abs(v);
    }
    cplx prev = sum.value() / double(n);
    double change = 0.0;
    while (n < kMaxPanels) {
        for (long j = 1; j < 2 * n; j += 2) {
            cplx v = f(kPi * double(j) / double(2 * n));
            sum.add(v);
            mass += std::abs(v);
        }
        n *= 2;
        cplx cur = sum.value() / double(n);
        double l1 = mass / double(n);
        change = std::abs(cur - prev);
        if (change <= rel_tol * l1) {
            if (std::abs(cur.imag()) > 1e-12 * std::max(1.0, l1))
                throw AccuracyError("legendre_conical: imaginary residue too large",
                                    std::abs(cur.imag()));
            return {cur.real(), n, change};
        }
        prev = cur;
    }
    throw AccuracyError("legendre_conical: trapezoid rule did not converge", change);
}

double legendre_conical_fixed(double lambda, double t, long panels) {
    if (!(t >= 0.0)) throw DomainError("legendre_conical: t must be non-negative");
    if (panels < 1) throw DomainError("legendre_conical_fixed: panels must be positive");
    if (t == 0.0) return 1.0;
    const ConicalIntegrand f(lambda, t);
    CompSum sum;
    sum.add(0.5 * (f(0.0) + f(kPi)));
    for (long j = 1; j < panels; ++j) sum.add(f(kPi * double(j) / double(panels)));
    return (sum.value() / double(panels)).real();
}

}  // namespace gfsl
