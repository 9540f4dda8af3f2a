#pragma once

#include <vector>

#include "gfsl/spherical.hpp"

namespace gfsl {

struct DiscreteParam {
    int l = 2;
    double mu = 0.0;

    explicit DiscreteParam(int lowest_weight);
};

// binom(l+k-1, k)^(1/2): norm factor of w^k in the weighted Bergman space.
double disk_basis(int l, int k);

struct DiskMatrices {
    KBandedOperator Theta, Nplus, Nminus, X, U, S;
};

// Generators on psi_0..psi_K of the lowest-weight l discrete series.
DiskMatrices build_disk_matrices(int l, int K);

// forward(n, k): coefficient of psi_n in the Cayley image of psi_k.
// backward(k, n): coefficient of psi_k in the inverse image of psi_n.
struct DiskCoeffTable {
    int l = 2;
    int N = 0;
    int K = 0;
    bool holomorphic = true;
    std::vector<cplx> fwd;  // (N+1) x (K+1), row n
    std::vector<cplx> bwd;  // (K+1) x (N+1), row k

    cplx forward(int n, int k) const {
        return fwd[static_cast<std::size_t>(n) * static_cast<std::size_t>(K + 1) + static_cast<std::size_t>(k)];
    }
    cplx backward(int k, int n) const {
        return bwd[static_cast<std::size_t>(k) * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(n)];
    }
};

// holomorphic = false yields the anti-holomorphic (highest weight -l) tables,
// computed from their own generating functions.
DiskCoeffTable cayley_coeffs(int l, int N, int K, bool holomorphic = true);

struct DiskResidual {
    double x = 0.0;
    double u = 0.0;
    double s = 0.0;
    double max() const { return std::max(x, std::max(u, s)); }
};

// Residuals of the X, U, S relations on 1 <= n <= N-1, 0 <= k <= K-1.
DiskResidual intertwine_residual_ds(int l, const DiskCoeffTable& t, const DiskMatrices& ops);

// Abel sum over n of backward(k_out, n) * forward(n, k_in). The summand is
// (-1)^n times a polynomial in n, so the sum is a finite Euler transform.
// The highest finite difference beyond the polynomial degree is returned in
// excess_difference as a structural check.
struct AbelPairing {
    cplx value;
    double excess_difference = 0.0;
    int degree = 0;
};
AbelPairing abel_pairing(int l, int k_out, int k_in);

CorrelationResult correlation_ds(int l, int k_out, int k_in, double tau, int N, double tol = 1e-10);

TraceResult trace_ds(int l, double t, int N);

// Multiplicity of the lowest-weight l discrete series on a genus g surface.
int rr_multiplicity(int genus, int l);

}  // namespace gfsl
