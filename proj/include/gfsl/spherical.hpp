#pragma once

#include <array>
#include <optional>
#include <vector>

#include "gfsl/specfun.hpp"

namespace gfsl {

enum class Regime { Principal, Complementary, Threshold };

// One spherical irreducible: mu = lambda^2 + 1/4, b_pm = -1/2 +- i lambda.
struct SpectralParam {
    double mu = 0.25;
    cplx lambda{0.0, 0.0};
    cplx b_plus{-0.5, 0.0};
    cplx b_minus{-0.5, 0.0};
    Regime regime = Regime::Threshold;

    static SpectralParam principal(double lambda);
    static SpectralParam complementary(double nu);  // lambda = i nu, 0 < nu < 1/2
    static SpectralParam threshold();
    static SpectralParam from_mu(double mu);
};

// Tridiagonal operator on psi_k, k_min <= k <= k_max. For column k:
// diag[k] = <psi_k|A psi_k>, super[k] = <psi_{k+1}|A psi_k>, sub[k] = <psi_{k-1}|A psi_k>.
struct KBandedOperator {
    int k_min = 0;
    int k_max = 0;
    std::vector<cplx> diag, super, sub;

    KBandedOperator() = default;
    KBandedOperator(int kmin, int kmax);
    int size() const { return k_max - k_min + 1; }
    bool contains(int k) const { return k >= k_min && k <= k_max; }
    // <psi_j|A psi_k>
    cplx at(int j, int k) const;
    void set(int j, int k, cplx v);
    KBandedOperator operator+(const KBandedOperator& o) const;
    KBandedOperator operator-(const KBandedOperator& o) const;
    KBandedOperator scaled(cplx c) const;
};

struct KMatrices {
    KBandedOperator X, U, S, Theta, Nplus, Nminus;
};

KMatrices build_k_matrices(const SpectralParam& p, int K);

enum class Branch { Plus, Minus, MinusRenormalized };

// Coefficients s_{n,k} for 0 <= n <= N, |k| <= K, and optionally the dual u_{n,k}.
// Correlations pair conj(u) with s.
struct CoeffTable {
    Branch branch = Branch::Plus;
    int N = 0;
    int K = 0;
    std::vector<cplx> s;
    std::vector<cplx> log_gauge;  // log t_n
    std::optional<std::vector<cplx>> dual;

    std::size_t index(int n, int k) const {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * K + 1) +
               static_cast<std::size_t>(k + K);
    }
    cplx at(int n, int k) const { return s[index(n, k)]; }
    cplx dual_at(int n, int k) const { return (*dual)[index(n, k)]; }
};

// log t_n for n <= n_max; t_n = prod_{j<n} (-2 b + j)^(-1/2) on the plus branch
// and ^(+1/2) on the minus branches.
std::vector<cplx> gauge_sequence(const SpectralParam& p, Branch branch, int n_max);

CoeffTable coeffs_plus(const SpectralParam& p, int N, int K);
CoeffTable coeffs_minus(const SpectralParam& p, int N, int K, bool renormalized);

// Dual coefficients for the given branch; attached to a table with matching (N, K).
std::vector<cplx> dual_coeffs(const SpectralParam& p, int N, int K, Branch branch);

// rho(lambda) = Gamma(1/2 - i lambda) / (sqrt(pi) Gamma(-i lambda)).
cplx renormalization_factor(cplx lambda);

struct IntertwineResidual {
    double x = 0.0;
    double u = 0.0;
    double s = 0.0;
    double max() const { return std::max(x, std::max(u, s)); }
};

// Per-coefficient residuals of the X, U, S relations on interior indices
// 1 <= n <= N-1, |k| <= K-1, each relative to the magnitude of the terms involved.
IntertwineResidual intertwine_residual(const SpectralParam& p, const CoeffTable& table,
                                       const KMatrices& ops);

// Both branches at lambda = 0 from their closed forms, in extended precision.
// gap receives max |s+ - s^-| before rounding to double.
CoeffTable coeffs_threshold(int N, int K, Branch branch, double* gap = nullptr);

struct ThresholdTables {
    int N = 0;
    int K = 0;
    std::vector<cplx> S;          // common lambda = 0 value
    std::vector<cplx> D;          // extrapolated divided difference
    std::vector<cplx> D_coarse;   // at step h
    std::vector<cplx> D_fine;     // at step h/2
    std::vector<cplx> S_coarse;   // (s+(h) + s^-(h)) / 2
    double coalescence_gap = 0.0;  // max |s+(0) - s^-(0)|, extended precision
    double error_estimate = 0.0;   // max |D_fine - D_coarse|
    double h = 0.0;
    cplx at_S(int n, int k) const { return S[idx(n, k)]; }
    cplx at_D(int n, int k) const { return D[idx(n, k)]; }
    std::size_t idx(int n, int k) const {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(2 * K + 1) +
               static_cast<std::size_t>(k + K);
    }
};

// S and D tables at lambda = 0. D = lim (s+(h) - s^-(h)) / (2 i h), extrapolated
// from steps h and h/2; the divided difference carries a first-order term.
ThresholdTables threshold_tables(int N, int K, double h = 1e-4);

struct JordanBlockModel {
    int n_max = 0;
};

using Block2 = std::array<std::array<double, 2>, 2>;

// [[e^{tau z}, tau e^{tau z}], [0, e^{tau z}]] with z = -n - 1/2.
std::vector<Block2> jordan_semigroup(const JordanBlockModel& j, double tau);

struct CorrelationResult {
    cplx value;
    double tail_bound = 0.0;
};

// <psi_{k_out}| e^{tau X} psi_{k_in}> from the resonance expansion truncated at N.
CorrelationResult correlation(const SpectralParam& p, int k_out, int k_in, double tau, int N,
                              double tol = 1e-10);

struct TraceResult {
    double flat = 0.0;
    std::vector<double> spectral_partial;  // partial sums for 0..N
    double tail_exact = 0.0;               // flat - spectral_partial[N]
    double tail_bound = 0.0;
};

TraceResult trace_spherical(const SpectralParam& p, double t, int N);

}  // namespace gfsl
