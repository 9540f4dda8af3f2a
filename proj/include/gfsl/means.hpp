#pragma once

#include <vector>

#include "gfsl/specfun.hpp"

namespace gfsl {

// W_{2m,lambda} = Gamma(m+1/2) Gamma(i lambda - m) / (pi m! Gamma(1/2 + i lambda - m)).
cplx hc_coefficient(int m, double lambda);

// e^{-t(1/2 - i lambda)} sum_{m <= M} e^{-2mt} W_{2m,lambda} plus the -lambda branch.
double hc_partial_sum(double lambda, double t, int M);

// |sqrt(pi) e^{i pi/4} sqrt(lambda) W_{0,lambda} - 1|
double w_plus_symbol_error(double lambda);

// Least-squares fit y(t) ~ e^{s t} (a cos(omega t) + b sin(omega t)), with the
// linear coefficients eliminated and s located by scan plus golden refinement.
struct DecayFit {
    double slope = 0.0;
    double a = 0.0;
    double b = 0.0;
    double rel_residual = 0.0;  // ||y - fit|| / ||y||
};
DecayFit fit_oscillating_decay(const std::vector<double>& t, const std::vector<double>& y, double omega,
                               double s_min = -6.0, double s_max = 1.0);

struct WaveResidual {
    std::vector<double> t;
    std::vector<double> r;  // second difference of E plus (lambda^2 + shift) E
    DecayFit fit;
    double noise_floor = 0.0;
    bool floor_limited = false;
};

// E(t) = e^{t/2} P_{-1/2+i lambda}(cosh t) on t_grid within [2, 6]; shift adds a
// constant to lambda^2 (1/4 gives the unshifted wave operator).
WaveResidual wave_residual(double lambda, const std::vector<double>& t_grid, double h = 1e-4,
                           double shift = 0.0);

// Per-mode decay of the spherical function on t_grid within [3, 8].
DecayFit ratner_decay(double lambda, const std::vector<double>& t_grid);

std::vector<double> linspace(double a, double b, int n);

}  // namespace gfsl
