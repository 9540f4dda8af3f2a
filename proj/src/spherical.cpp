#include "gfsl/spherical.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "gfsl/errors.hpp"
#include "gfsl/parallel.hpp"

namespace gfsl {

namespace {

const double kHalfLogPi = 0.5 * std::log(kPi);

// i^k for integer k.
cplx ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

double binom(int n, int j) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0));
}

double half_log_factorial(int n) { return 0.5 * std::lgamma(n + 1.0); }

// Sum over j of binom(2|k|, j) (sg i)^j exp(log_pre + log_moment(n + j)), where
// the moment of index 2r is supplied by log_m(r) (nullopt for an exact zero).
template <class LogMoment>
cplx moment_expansion(int n, int k, cplx log_pre, LogMoment&& log_m) {
    int ak = std::abs(k);
    cplx sgi = k >= 0 ? kI : -kI;
    cplx acc = 0.0;
    cplx w = 1.0;
    for (int j = 0; j <= 2 * ak; ++j, w *= sgi) {
        if ((n + j) % 2 != 0) continue;
        std::optional<cplx> lm = log_m((n + j) / 2);
        if (!lm) continue;
        acc += binom(2 * ak, j) * w * std::exp(log_pre + *lm);
    }
    return acc;
}

// log of the line moment integral of x^{2r} (1+x^2)^c.
std::optional<cplx> log_line_moment(int r, cplx c, PoleMode mode) {
    auto g = log_gamma_ratio(-c - double(r) - 0.5, -c, mode);
    if (!g) return std::nullopt;
    return std::lgamma(r + 0.5) + *g;
}

// Same moment of x^n (1+ix)^p (1-ix)^q after splitting x = ((1+ix) - (1-ix)) / 2i:
// n+1 line integrals of (1+ix)^a (1-ix)^b, each a closed gamma quotient.
// Preferred when n < 2|k|, where the binomial sum in k cancels badly.
cplx split_moment(int n, cplx p, cplx q, cplx log_pre) {
    const double log2 = std::log(2.0);
    cplx acc = 0.0;
    for (int j = 0; j <= n; ++j) {
        cplx a = p + double(j), b = q + double(n - j);
        if (is_gamma_pole(-a) || is_gamma_pole(-b)) continue;
        cplx lb = std::log(kPi) + (a + b + 2.0) * log2 + log_gamma(-a - b - 1.0) - log_gamma(-a) - log_gamma(-b);
        double sign = (n - j) % 2 == 0 ? 1.0 : -1.0;
        acc += sign * binom(n, j) * std::exp(log_pre + lb - double(n) * std::log(cplx(0.0, 2.0)));
    }
    return acc;
}

CoeffTable make_table(Branch br, int N, int K) {
    if (N < 1 || K < 1) throw DomainError("coefficient table needs N >= 1 and K >= 1");
    CoeffTable t;
    t.branch = br;
    t.N = N;
    t.K = K;
    t.s.assign(static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(2 * K + 1), 0.0);
    return t;
}

}  // namespace

SpectralParam SpectralParam::principal(double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("principal series needs lambda >= 0");
    SpectralParam p;
    p.lambda = lambda;
    p.mu = lambda * lambda + 0.25;
    p.b_plus = cplx(-0.5, lambda);
    p.b_minus = cplx(-0.5, -lambda);
    p.regime = lambda == 0.0 ? Regime::Threshold : Regime::Principal;
    return p;
}

SpectralParam SpectralParam::complementary(double nu) {
    if (!(nu > 0.0 && nu < 0.5)) throw DomainError("complementary series needs 0 < nu < 1/2");
    SpectralParam p;
    p.lambda = cplx(0.0, nu);
    p.mu = 0.25 - nu * nu;
    p.b_plus = cplx(-0.5 - nu, 0.0);
    p.b_minus = cplx(-0.5 + nu, 0.0);
    p.regime = Regime::Complementary;
    return p;
}

SpectralParam SpectralParam::threshold() { return principal(0.0); }

SpectralParam SpectralParam::from_mu(double mu) {
    if (!(mu > 0.0)) throw DomainError("spherical parameter needs mu > 0");
    if (mu > 0.25) return principal(std::sqrt(mu - 0.25));
    if (mu < 0.25) return complementary(std::sqrt(0.25 - mu));
    return threshold();
}

KBandedOperator::KBandedOperator(int kmin, int kmax)
    : k_min(kmin), k_max(kmax), diag(kmax - kmin + 1, 0.0), super(kmax - kmin + 1, 0.0),
      sub(kmax - kmin + 1, 0.0) {}

cplx KBandedOperator::at(int j, int k) const {
    if (!contains(k) || !contains(j)) return 0.0;
    std::size_t c = static_cast<std::size_t>(k - k_min);
    if (j == k) return diag[c];
    if (j == k + 1) return super[c];
    if (j == k - 1) return sub[c];
    return 0.0;
}

void KBandedOperator::set(int j, int k, cplx v) {
    std::size_t c = static_cast<std::size_t>(k - k_min);
    if (j == k) diag[c] = v;
    else if (j == k + 1) super[c] = v;
    else if (j == k - 1) sub[c] = v;
    else throw DomainError("KBandedOperator: entry outside the band");
}

KBandedOperator KBandedOperator::operator+(const KBandedOperator& o) const {
    KBandedOperator r(*this);
    for (int i = 0; i < size(); ++i) {
        r.diag[i] += o.diag[i];
        r.super[i] += o.super[i];
        r.sub[i] += o.sub[i];
    }
    return r;
}

KBandedOperator KBandedOperator::operator-(const KBandedOperator& o) const {
    return *this + o.scaled(-1.0);
}

KBandedOperator KBandedOperator::scaled(cplx c) const {
    KBandedOperator r(*this);
    for (int i = 0; i < size(); ++i) {
        r.diag[i] *= c;
        r.super[i] *= c;
        r.sub[i] *= c;
    }
    return r;
}

KMatrices build_k_matrices(const SpectralParam& p, int K) {
    if (K < 2) throw DomainError("build_k_matrices: K must be at least 2");
    const cplx b = p.b_plus;
    KMatrices m;
    m.X = m.Theta = m.Nplus = m.Nminus = KBandedOperator(-K, K);
    for (int k = -K; k <= K; ++k) {
        m.Theta.set(k, k, 2.0 * k);
        if (k < K) {
            m.Nplus.set(k + 1, k, kI * (double(k) - b));
            m.X.set(k + 1, k, 0.5 * kI * (double(k) - b));
        }
        if (k > -K) {
            m.Nminus.set(k - 1, k, kI * (double(k) + b));
            m.X.set(k - 1, k, 0.5 * kI * (double(k) + b));
        }
    }
    KBandedOperator diff = m.Nminus - m.Nplus;
    m.U = (diff - m.Theta).scaled(0.5 * kI);
    m.S = (diff + m.Theta).scaled(0.5 * kI);
    return m;
}

std::vector<cplx> gauge_sequence(const SpectralParam& p, Branch branch, int n_max) {
    const bool plus = branch == Branch::Plus;
    const cplx b = plus ? p.b_plus : p.b_minus;
    const double e = plus ? -0.5 : 0.5;
    std::vector<cplx> lg(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int n = 0; n < n_max; ++n) {
        cplx f = -2.0 * b + double(n);
        if (f == cplx(0.0)) throw DomainError("gauge_sequence: branch point at j = " + std::to_string(n));
        lg[n + 1] = lg[n] + e * std::log(f);
    }
    return lg;
}

cplx renormalization_factor(cplx lambda) {
    cplx mil = -kI * lambda;
    return gamma_ratio(0.5 + mil, mil, PoleMode::Limit) / std::sqrt(kPi);
}

CoeffTable coeffs_plus(const SpectralParam& p, int N, int K) {
    CoeffTable t = make_table(Branch::Plus, N, K);
    t.log_gauge = gauge_sequence(p, Branch::Plus, N);
    const cplx b = p.b_plus;
    parallel_for(2 * K + 1, [&](int c) {
        int k = c - K;
        std::vector<cplx> a = taylor_two_factor(b + double(k), b - double(k), N);
        cplx phase = ipow(k);
        for (int n = 0; n <= N; ++n)
            t.s[t.index(n, k)] =
                phase * a[n] * std::exp(t.log_gauge[n] + half_log_factorial(n) - kHalfLogPi);
    });
    return t;
}

CoeffTable coeffs_minus(const SpectralParam& p, int N, int K, bool renormalized) {
    CoeffTable t = make_table(renormalized ? Branch::MinusRenormalized : Branch::Minus, N, K);
    t.log_gauge = gauge_sequence(p, Branch::Minus, N);
    const cplx b = p.b_plus;
    parallel_for(2 * K + 1, [&](int c) {
        int k = c - K;
        int ak = std::abs(k);
        cplx phase = ipow(-k);
        if (!renormalized) {
            for (int n = 0; n <= N; ++n) {
                cplx pre = t.log_gauge[n] - half_log_factorial(n) - kHalfLogPi;
                t.s[t.index(n, k)] = phase * moment_expansion(n, k, pre, [&](int r) {
                    return log_line_moment(r, b - double(ak), PoleMode::Strict);
                });
            }
            return;
        }
        // rho * moment = Gamma(r+1/2)/sqrt(pi) * Gamma(-b)/Gamma(-b+|k|)
        //                * Gamma(|k|-b-1/2-r)/Gamma(-b-1/2)
        auto head = log_gamma_ratio(-b, -b + double(ak), PoleMode::Strict);
        for (int n = 0; n <= N; ++n) {
            cplx pre = t.log_gauge[n] - half_log_factorial(n) - 2.0 * kHalfLogPi + *head;
            cplx v = phase * moment_expansion(n, k, pre, [&](int r) -> std::optional<cplx> {
                auto g = log_gamma_ratio(double(ak) - b - 0.5 - double(r), -b - 0.5, PoleMode::Limit);
                if (!g) return std::nullopt;
                return std::lgamma(r + 0.5) + *g;
            });
            t.s[t.index(n, k)] = (n % 2 == 0) ? v : -v;
        }
    });
    return t;
}

std::vector<cplx> dual_coeffs(const SpectralParam& p, int N, int K, Branch branch) {
    const cplx b = p.b_plus;
    const cplx bd = -1.0 - b;
    std::vector<cplx> u(static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(2 * K + 1), 0.0);
    auto idx = [&](int n, int k) {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * K + 1) +
               static_cast<std::size_t>(k + K);
    };
    if (branch == Branch::Plus) {
        std::vector<cplx> lg = gauge_sequence(p, Branch::Plus, N);
        parallel_for(2 * K + 1, [&](int c) {
            int k = c - K;
            int ak = std::abs(k);
            cplx phase = ipow(-k);
            for (int n = 0; n <= N; ++n) {
                cplx pre = -lg[n] - half_log_factorial(n) - kHalfLogPi;
                cplx L = n < 2 * ak ? phase * split_moment(n, bd - double(k), bd + double(k), pre)
                                    : phase * moment_expansion(n, -k, pre, [&](int r) {
                                          return log_line_moment(r, bd - double(ak), PoleMode::Strict);
                                      });
                u[idx(n, k)] = std::conj(L);
            }
        });
        return u;
    }
    std::vector<cplx> lg = gauge_sequence(p, Branch::Minus, N);
    cplx inv_rho = 1.0;
    if (branch == Branch::MinusRenormalized) {
        cplx rho = renormalization_factor(p.lambda);
        if (rho == cplx(0.0)) throw PoleError("dual of the renormalized branch is singular at lambda = 0");
        inv_rho = 1.0 / rho;
    }
    parallel_for(2 * K + 1, [&](int c) {
        int k = c - K;
        std::vector<cplx> a = taylor_two_factor(bd - double(k), bd + double(k), N);
        cplx phase = ipow(k);
        for (int n = 0; n <= N; ++n) {
            cplx L = phase * a[n] * std::exp(half_log_factorial(n) - lg[n] - kHalfLogPi);
            if (branch == Branch::MinusRenormalized) L *= (n % 2 == 0 ? inv_rho : -inv_rho);
            u[idx(n, k)] = std::conj(L);
        }
    });
    return u;
}

IntertwineResidual intertwine_residual(const SpectralParam& p, const CoeffTable& t,
                                       const KMatrices& ops) {
    const bool plus = t.branch == Branch::Plus;
    const cplx bs = plus ? p.b_plus : p.b_minus;
    const double sg = t.branch == Branch::Minus ? -1.0 : 1.0;
    if (ops.X.k_min > -t.K || ops.X.k_max < t.K)
        throw DomainError("intertwine_residual: operator range does not cover the table");
    IntertwineResidual r;
    auto side = [&](const KBandedOperator& M, int n, int k, double& mag) {
        cplx acc = 0.0;
        for (int j = k - 1; j <= k + 1; ++j) {
            cplx term = M.at(j, k) * t.at(n, j);
            acc += term;
            mag += std::abs(term);
        }
        return acc;
    };
    auto rel = [](cplx lhs, cplx rhs, double mag) {
        mag += std::abs(rhs);
        return mag > 0.0 ? std::abs(lhs - rhs) / mag : 0.0;
    };
    for (int n = 1; n <= t.N - 1; ++n) {
        for (int k = -t.K + 1; k <= t.K - 1; ++k) {
            double mx = 0.0, mu = 0.0, ms = 0.0;
            cplx lx = side(ops.X, n, k, mx);
            cplx lu = side(ops.U, n, k, mu);
            cplx ls = side(ops.S, n, k, ms);
            cplx rx = (-double(n) + bs) * t.at(n, k);
            cplx ru = -sg * std::sqrt(double(n)) * std::sqrt(double(n) - 1.0 - 2.0 * bs) * t.at(n - 1, k);
            cplx rs = sg * std::sqrt(double(n) - 2.0 * bs) * std::sqrt(double(n) + 1.0) * t.at(n + 1, k);
            r.x = std::max(r.x, rel(lx, rx, mx));
            r.u = std::max(r.u, rel(lu, ru, mu));
            r.s = std::max(r.s, rel(ls, rs, ms));
        }
    }
    return r;
}

namespace {

using cld = std::complex<long double>;

cld ipow_ld(int k) {
    cplx v = ipow(k);
    return {static_cast<long double>(v.real()), static_cast<long double>(v.imag())};
}

// lambda = 0 plus branch: t_n = 1/sqrt(n!), so s = i^k a_n(k - 1/2, -k - 1/2) / sqrt(pi).
std::vector<cld> threshold_plus_ld(int N, int k) {
    const long double inv_sqrt_pi = 1.0L / std::sqrt(3.141592653589793238462643383279502884L);
    std::vector<cld> a(static_cast<std::size_t>(N) + 1);
    a[0] = 1.0L;
    if (N >= 1) a[1] = cld(0.0L, 2.0L * k);
    for (int m = 1; m < N; ++m)
        a[m + 1] = (cld(0.0L, 2.0L * k) * a[m] - static_cast<long double>(m) * a[m - 1]) /
                   static_cast<long double>(m + 1);
    cld ph = ipow_ld(k);
    for (auto& v : a) v *= ph * inv_sqrt_pi;
    return a;
}

// lambda = 0 renormalized minus branch. With t_n = sqrt(n!) the moment of index
// 2r collapses to Gamma(r + 1/2) (-1)^(r-|k|) / (r-|k|)! for r >= |k| and 0 below.
std::vector<cld> threshold_minus_ld(int N, int k) {
    const long double pi = 3.141592653589793238462643383279502884L;
    int ak = std::abs(k);
    long double head = std::lgamma(0.5L) - std::lgamma(0.5L + ak) - std::log(pi);
    cld sgi = k >= 0 ? cld(0.0L, 1.0L) : cld(0.0L, -1.0L);
    std::vector<long double> bin(static_cast<std::size_t>(2 * ak) + 1, 1.0L);
    for (int j = 1; j <= 2 * ak; ++j) bin[j] = bin[j - 1] * (2 * ak - j + 1) / j;
    std::vector<cld> out(static_cast<std::size_t>(N) + 1);
    cld ph = ipow_ld(-k);
    for (int n = 0; n <= N; ++n) {
        cld acc = 0.0L, w = 1.0L;
        for (int j = 0; j <= 2 * ak; ++j, w *= sgi) {
            if ((n + j) % 2 != 0) continue;
            int r = (n + j) / 2;
            if (r < ak) continue;
            long double m = std::exp(head + std::lgamma(r + 0.5L) - std::lgamma(r - ak + 1.0L));
            if ((r - ak) % 2 != 0) m = -m;
            acc += bin[j] * w * m;
        }
        out[n] = (n % 2 == 0 ? ph : -ph) * acc;
    }
    return out;
}

}  // namespace

CoeffTable coeffs_threshold(int N, int K, Branch branch, double* gap) {
    if (branch == Branch::Minus) throw DomainError("coeffs_threshold: the raw minus branch is singular at lambda = 0");
    CoeffTable t = make_table(branch, N, K);
    t.log_gauge = gauge_sequence(SpectralParam::threshold(), branch == Branch::Plus ? Branch::Plus : Branch::Minus, N);
    long double g = 0.0L;
    for (int k = -K; k <= K; ++k) {
        std::vector<cld> sp = threshold_plus_ld(N, k);
        std::vector<cld> sm = threshold_minus_ld(N, k);
        const std::vector<cld>& mine = branch == Branch::Plus ? sp : sm;
        for (int n = 0; n <= N; ++n) {
            t.s[t.index(n, k)] = cplx(static_cast<double>(mine[n].real()), static_cast<double>(mine[n].imag()));
            g = std::max(g, std::abs(sp[n] - sm[n]));
        }
    }
    if (gap) *gap = static_cast<double>(g);
    return t;
}

ThresholdTables threshold_tables(int N, int K, double h) {
    if (!(h > 0.0 && h <= 1e-3)) throw DomainError("threshold_tables: step must satisfy 0 < h <= 1e-3");
    ThresholdTables out;
    out.N = N;
    out.K = K;
    out.h = h;
    CoeffTable sp0 = coeffs_threshold(N, K, Branch::Plus, &out.coalescence_gap);
    CoeffTable sm0 = coeffs_threshold(N, K, Branch::MinusRenormalized, nullptr);
    const std::size_t sz = sp0.s.size();
    if (out.coalescence_gap > 1e-9)
        throw ConsistencyError("threshold_tables: branches disagree at lambda = 0 (gap " +
                               std::to_string(out.coalescence_gap) + ")");
    out.S.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) out.S[i] = 0.5 * (sp0.s[i] + sm0.s[i]);

    auto divided = [&](double step, std::vector<cplx>* mean) {
        SpectralParam ph = SpectralParam::principal(step);
        CoeffTable a = coeffs_plus(ph, N, K);
        CoeffTable c = coeffs_minus(ph, N, K, true);
        std::vector<cplx> d(sz);
        for (std::size_t i = 0; i < sz; ++i) d[i] = (a.s[i] - c.s[i]) / (2.0 * kI * step);
        if (mean) {
            mean->resize(sz);
            for (std::size_t i = 0; i < sz; ++i) (*mean)[i] = 0.5 * (a.s[i] + c.s[i]);
        }
        return d;
    };
    out.D_coarse = divided(h, &out.S_coarse);
    out.D_fine = divided(0.5 * h, nullptr);
    out.D.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) {
        out.D[i] = 2.0 * out.D_fine[i] - out.D_coarse[i];
        out.error_estimate = std::max(out.error_estimate, std::abs(out.D_fine[i] - out.D_coarse[i]));
    }
    return out;
}

std::vector<Block2> jordan_semigroup(const JordanBlockModel& j, double tau) {
    if (tau < 0.0) throw DomainError("jordan_semigroup: tau must be non-negative");
    std::vector<Block2> out(static_cast<std::size_t>(j.n_max) + 1);
    for (int n = 0; n <= j.n_max; ++n) {
        double e = std::exp(-tau * (n + 0.5));
        out[n] = Block2{{{e, tau * e}, {0.0, e}}};
    }
    return out;
}

CorrelationResult correlation(const SpectralParam& p, int k_out, int k_in, double tau, int N,
                              double tol) {
    if (!(tau > 0.0)) throw DomainError("correlation: tau must be positive");
    if (p.regime == Regime::Threshold)
        throw DomainError("correlation: threshold regime needs the Jordan model");
    int K = std::max(1, std::max(std::abs(k_out), std::abs(k_in)));
    CoeffTable sp = coeffs_plus(p, N, K);
    CoeffTable sm = coeffs_minus(p, N, K, false);
    std::vector<cplx> up = dual_coeffs(p, N, K, Branch::Plus);
    std::vector<cplx> um = dual_coeffs(p, N, K, Branch::Minus);
    CorrelationResult r{0.0, 0.0};
    double last = 0.0, prev = 0.0;
    for (int n = 0; n <= N; ++n) {
        std::size_t io = sp.index(n, k_out);
        cplx term = std::exp(tau * (-double(n) + p.b_plus)) * std::conj(up[io]) * sp.at(n, k_in) +
                    std::exp(tau * (-double(n) + p.b_minus)) * std::conj(um[io]) * sm.at(n, k_in);
        r.value += term;
        prev = last;
        last = std::abs(term);
    }
    double tmax = std::max(last, prev);
    double pw = std::abs(k_in) + std::abs(k_out);
    double tail = 0.0;
    for (int m = 1; m < 10000; ++m) {
        double inc = tmax * std::exp(-tau * m) * std::pow(double(N + m) / double(std::max(N, 1)), pw);
        tail += inc;
        if (inc < 1e-18 * (tail + 1e-300)) break;
    }
    r.tail_bound = tail;
    if (tail > tol)
        throw AccuracyError("correlation: resonance tail exceeds tolerance", tail);
    return r;
}

TraceResult trace_spherical(const SpectralParam& p, double t, int N) {
    if (!(t > 0.0)) throw DomainError("trace_spherical: t must be positive");
    TraceResult r;
    const double q = std::exp(-t);
    const double c = std::cos(t * p.lambda).real();
    r.flat = 2.0 * c * std::exp(-0.5 * t) / (1.0 - q);
    r.spectral_partial.resize(static_cast<std::size_t>(N) + 1);
    double acc = 0.0;
    for (int n = 0; n <= N; ++n) {
        acc += (std::exp(t * (-double(n) + p.b_plus)) + std::exp(t * (-double(n) + p.b_minus))).real();
        r.spectral_partial[n] = acc;
    }
    const double g = std::exp(-t * (N + 1.5)) / (1.0 - q);
    r.tail_exact = 2.0 * c * g;
    r.tail_bound = 2.0 * std::max(1.0, std::abs(c)) * g;
    return r;
}

}  // namespace gfsl
