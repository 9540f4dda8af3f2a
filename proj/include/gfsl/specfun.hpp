#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace gfsl {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

enum class PoleMode {
    Strict,  // any pole configuration that is not a plain zero is an error
    Limit    // Gamma(-p+e)/Gamma(-q+e) -> (-1)^(p-q) q!/p! as e -> 0
};

// True when z is exactly 0, -1, -2, ...; the index is written to n.
bool is_gamma_pole(cplx z, long* n = nullptr);

// log Gamma(z) on the branch continuous off the negative real axis, with
// log Gamma(z+1) = log Gamma(z) + log z.
cplx log_gamma(cplx z);

// log sin(pi z), stable for large |Im z|. Imaginary part is defined mod 2 pi.
cplx log_sin_pi(cplx z);

// log(Gamma(z)/Gamma(w)) modulo 2 pi i. An empty result means the ratio is
// exactly zero (w a pole, z regular).
std::optional<cplx> log_gamma_ratio(cplx z, cplx w, PoleMode mode = PoleMode::Strict);

cplx gamma_ratio(cplx z, cplx w, PoleMode mode = PoleMode::Strict);

// Taylor coefficients a_0..a_nmax of (1+ix)^alpha (1-ix)^beta.
std::vector<cplx> taylor_two_factor(cplx alpha, cplx beta, int n_max);

// Meromorphic continuation of the line integral of (1+ix)^alpha (1-ix)^beta.
cplx beta_line_integral(cplx alpha, cplx beta, PoleMode mode = PoleMode::Strict);

// P_{-1/2+i lambda}(cosh t) from its circle-average representation.
double legendre_conical(double lambda, double t, double rel_tol = 1e-12);

struct ConicalQuadrature {
    double value = 0.0;
    long panels = 0;        // trapezoid panels on [0, pi] at convergence
    double last_change = 0.0;
};

ConicalQuadrature legendre_conical_adaptive(double lambda, double t, double rel_tol = 1e-12);

// Same quadrature at a fixed panel count; smooth in t, for finite differences.
double legendre_conical_fixed(double lambda, double t, long panels);

}  // namespace gfsl
