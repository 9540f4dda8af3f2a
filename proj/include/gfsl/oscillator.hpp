#pragma once

#include <utility>
#include <vector>

#include "gfsl/specfun.hpp"

namespace gfsl {

// u(x) = P(x) exp(-width x^2 / 2) with P given by its monomial coefficients.
struct GaussPolyFunction {
    std::vector<cplx> poly;
    cplx width{1.0, 0.0};

    GaussPolyFunction() = default;
    GaussPolyFunction(std::vector<cplx> p, cplx w);

    GaussPolyFunction times_x() const;
    GaussPolyFunction derivative() const;
    // (x d/dx + 1/2) u
    GaussPolyFunction euler() const;
    GaussPolyFunction scaled(cplx c) const;
    cplx operator()(double x) const;
};

using CoeffVector = std::vector<cplx>;

// u^(n)(0) / sqrt(n!) for n <= n_max.
CoeffVector t_plus(const GaussPolyFunction& u, int n_max);

// (1/sqrt(n!)) * integral of x^n u(x) over the real line, for n <= n_max.
CoeffVector t_minus(const GaussPolyFunction& u, int n_max);

struct GaussianFlowResult {
    cplx beta;
    cplx prefactor;
};

// exp(alpha Q) phi_beta = prefactor * phi_{beta+alpha}; the strip 0 < Re < pi/2
// must hold for both beta and beta + alpha.
GaussianFlowResult gaussian_flow(cplx beta, double alpha);

// Ladder model on truncated sequences; entries that would reference an index
// beyond the truncation are set to zero.
CoeffVector apply_raise(const CoeffVector& v);   // (a+ v)_n = sqrt(n) v_{n-1}
CoeffVector apply_lower(const CoeffVector& v);   // (a- v)_n = sqrt(n+1) v_{n+1}
CoeffVector apply_number(const CoeffVector& v);  // (A v)_n = n v_n

}  // namespace gfsl
