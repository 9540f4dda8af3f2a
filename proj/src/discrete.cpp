#include "gfsl/discrete.hpp"

#include <cmath>

#include "gfsl/errors.hpp"
#include "gfsl/parallel.hpp"

namespace gfsl {

namespace {

double log_binom(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log binom(l+k-1, k)
double log_weight(int l, int k) { return log_binom(double(l + k - 1), double(k)); }

cplx ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// (1 - i)^l, or (1 + i)^l when conj is set.
cplx one_minus_i_pow(int l, bool conj) {
    return std::polar(std::pow(std::sqrt(2.0), l), (conj ? 0.25 : -0.25) * kPi * l);
}

void check_l(int l) {
    if (l < 2 || l % 2 != 0) throw DomainError("discrete series needs even l >= 2");
}

}  // namespace

DiscreteParam::DiscreteParam(int lowest_weight) : l(lowest_weight), mu(-0.25 * lowest_weight * (lowest_weight - 2)) {
    check_l(l);
}

double disk_basis(int l, int k) {
    if (k < 0) throw DomainError("disk_basis: k must be non-negative");
    check_l(l);
    return std::exp(0.5 * log_weight(l, k));
}

DiskMatrices build_disk_matrices(int l, int K) {
    check_l(l);
    if (K < 2) throw DomainError("build_disk_matrices: K must be at least 2");
    DiskMatrices m;
    m.Theta = m.Nplus = m.Nminus = m.X = KBandedOperator(0, K);
    for (int k = 0; k <= K; ++k) {
        m.Theta.set(k, k, double(l + 2 * k));
        if (k < K) {
            double c = std::sqrt(double(k + 1) * double(l + k));
            m.Nplus.set(k + 1, k, c);
            m.Nminus.set(k, k + 1, -c);
        }
    }
    m.X = (m.Nplus + m.Nminus).scaled(0.5);
    KBandedOperator diff = m.Nminus - m.Nplus;
    m.U = (diff - m.Theta).scaled(0.5 * kI);
    m.S = (diff + m.Theta).scaled(0.5 * kI);
    return m;
}

DiskCoeffTable cayley_coeffs(int l, int N, int K, bool holomorphic) {
    check_l(l);
    if (N < 1 || K < 0) throw DomainError("cayley_coeffs: needs N >= 1 and K >= 0");
    DiskCoeffTable t;
    t.l = l;
    t.N = N;
    t.K = K;
    t.holomorphic = holomorphic;
    t.fwd.assign(static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(K + 1), 0.0);
    t.bwd.assign(static_cast<std::size_t>(K + 1) * static_cast<std::size_t>(N + 1), 0.0);
    const bool cj = !holomorphic;
    const cplx lead = one_minus_i_pow(l, cj);

    // forward: i^{l+2k} (1-i)^l sqrt(binom(l+k-1,k)) [w^n] (1-iw)^k (1+iw)^{-l-k} / sqrt(binom(l+n-1,n))
    parallel_for(K + 1, [&](int k) {
        std::vector<cplx> a = cj ? taylor_two_factor(double(k), double(-l - k), N)
                                 : taylor_two_factor(double(-l - k), double(k), N);
        cplx c = (cj ? ipow(-(l + 2 * k)) : ipow(l + 2 * k)) * lead;
        for (int n = 0; n <= N; ++n)
            t.fwd[static_cast<std::size_t>(n) * (K + 1) + k] =
                c * a[n] * std::exp(0.5 * (log_weight(l, k) - log_weight(l, n)));
    });

    // backward: sqrt(binom(l+n-1,n)) (1-i)^l (-i)^n [w^k] (1+w)^n (1-w)^{-l-n} / sqrt(binom(l+k-1,k))
    parallel_for(N + 1, [&](int n) {
        cplx c = (cj ? ipow(n) : ipow(-n)) * lead;
        for (int k = 0; k <= K; ++k) {
            double sum = 0.0;
            for (int j = 0; j <= std::min(n, k); ++j)
                sum += std::exp(log_binom(n, j) + log_binom(double(l + n + k - j - 1), double(k - j)));
            t.bwd[static_cast<std::size_t>(k) * (N + 1) + n] =
                c * sum * std::exp(0.5 * (log_weight(l, n) - log_weight(l, k)));
        }
    });
    return t;
}

DiskResidual intertwine_residual_ds(int l, const DiskCoeffTable& t, const DiskMatrices& ops) {
    if (ops.X.k_min != 0 || ops.X.k_max < t.K)
        throw DomainError("intertwine_residual_ds: operator range does not cover the table");
    // The anti-holomorphic tables intertwine the conjugated generators.
    auto entry = [&](const KBandedOperator& M, int j, int k) {
        cplx v = M.at(j, k);
        return t.holomorphic ? v : std::conj(v);
    };
    DiskResidual r;
    auto side = [&](const KBandedOperator& M, int n, int k, double& mag) {
        cplx acc = 0.0;
        for (int j = std::max(0, k - 1); j <= k + 1; ++j) {
            cplx term = entry(M, j, k) * t.forward(n, j);
            acc += term;
            mag += std::abs(term);
        }
        return acc;
    };
    auto rel = [](cplx lhs, cplx rhs, double mag) {
        mag += std::abs(rhs);
        return mag > 0.0 ? std::abs(lhs - rhs) / mag : 0.0;
    };
    const double half_l = 0.5 * l;
    for (int n = 1; n <= t.N - 1; ++n) {
        for (int k = 0; k <= t.K - 1; ++k) {
            double mx = 0.0, mu = 0.0, ms = 0.0;
            cplx lx = side(ops.X, n, k, mx);
            cplx lu = side(ops.U, n, k, mu);
            cplx ls = side(ops.S, n, k, ms);
            cplx rx = -(double(n) + half_l) * t.forward(n, k);
            cplx ru = std::sqrt(double(n)) * std::sqrt(double(n - 1 + l)) * t.forward(n - 1, k);
            cplx rs = -std::sqrt(double(n + l)) * std::sqrt(double(n + 1)) * t.forward(n + 1, k);
            r.x = std::max(r.x, rel(lx, rx, mx));
            r.u = std::max(r.u, rel(lu, ru, mu));
            r.s = std::max(r.s, rel(ls, rs, ms));
        }
    }
    return r;
}

AbelPairing abel_pairing(int l, int k_out, int k_in) {
    check_l(l);
    AbelPairing out;
    out.degree = l + k_in - 1 + k_out;
    const int pts = out.degree + 2;
    DiskCoeffTable t = cayley_coeffs(l, pts, std::max(k_out, k_in));
    std::vector<cplx> d(static_cast<std::size_t>(pts));
    double scale = 0.0;
    for (int n = 0; n < pts; ++n) {
        cplx v = t.backward(k_out, n) * t.forward(n, k_in);
        d[n] = (n % 2 == 0) ? v : -v;
        scale = std::max(scale, std::abs(v));
    }
    // sum_n (-1)^n a_n = sum_j (-1)^j (Delta^j a)(0) / 2^{j+1}
    cplx acc = 0.0;
    double w = 0.5;
    for (int j = 0; j < pts; ++j) {
        if (j <= out.degree) acc += (j % 2 == 0 ? w : -w) * d[0];
        else out.excess_difference = std::abs(d[0]) / scale;
        for (std::size_t i = 0; i + 1 < d.size() - j; ++i) d[i] = d[i + 1] - d[i];
        w *= 0.5;
    }
    out.value = acc;
    return out;
}

CorrelationResult correlation_ds(int l, int k_out, int k_in, double tau, int N, double tol) {
    if (!(tau > 0.0)) throw DomainError("correlation_ds: tau must be positive");
    if (k_out < 0 || k_in < 0) throw DomainError("correlation_ds: K-types start at 0");
    DiskCoeffTable t = cayley_coeffs(l, N, std::max(k_out, k_in));
    CorrelationResult r{0.0, 0.0};
    double last = 0.0, prev = 0.0;
    for (int n = 0; n <= N; ++n) {
        cplx term = std::exp(-tau * (n + 0.5 * l)) * t.backward(k_out, n) * t.forward(n, k_in);
        r.value += term;
        prev = last;
        last = std::abs(term);
    }
    double tmax = std::max(last, prev);
    double pw = l - 1 + k_in + k_out;
    double tail = 0.0;
    for (int m = 1; m < 100000; ++m) {
        double inc = tmax * std::exp(-tau * m) * std::pow(double(N + m) / double(std::max(N, 1)), pw);
        tail += inc;
        if (inc < 1e-18 * (tail + 1e-300)) break;
    }
    r.tail_bound = tail;
    if (tail > tol) throw AccuracyError("correlation_ds: resonance tail exceeds tolerance", tail);
    return r;
}

TraceResult trace_ds(int l, double t, int N) {
    check_l(l);
    if (!(t > 0.0)) throw DomainError("trace_ds: t must be positive");
    TraceResult r;
    const double q = std::exp(-t);
    r.flat = std::exp(-0.5 * t * l) / (1.0 - q);
    r.spectral_partial.resize(static_cast<std::size_t>(N) + 1);
    double acc = 0.0;
    for (int n = 0; n <= N; ++n) {
        acc += std::exp(-t * (n + 0.5 * l));
        r.spectral_partial[n] = acc;
    }
    r.tail_exact = std::exp(-t * (N + 1 + 0.5 * l)) / (1.0 - q);
    r.tail_bound = r.tail_exact;
    return r;
}

int rr_multiplicity(int genus, int l) {
    if (genus < 2) throw DomainError("rr_multiplicity: genus must be at least 2");
    check_l(l);
    return l == 2 ? genus : (l - 1) * (genus - 1);
}

}  // namespace gfsl
