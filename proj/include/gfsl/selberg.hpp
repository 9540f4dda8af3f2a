#pragma once

#include <array>
#include <optional>
#include <vector>

#include "gfsl/global_traces.hpp"
#include "gfsl/specfun.hpp"

namespace gfsl {

// Real 2x2 matrix {a, b, c, d} acting by z -> (a z + b) / (c z + d).
using RealMat2 = std::array<double, 4>;

struct FuchsianGroup {
    std::vector<RealMat2> generators;
    // +(i+1) stands for generator i, -(i+1) for its inverse.
    std::vector<int> relator;

    double relator_residual() const;  // min over signs of |product -+ I|_max
    double max_det_error() const;
};

// Genus 2 regular octagon group: g_k = R(k pi/4) T R(-k pi/4), k = 0..3.
FuchsianGroup bolza_group();

struct LengthEntry {
    double length = 0.0;
    int multiplicity = 0;  // oriented primitive conjugacy classes
};

struct IterateEntry {
    double length = 0.0;      // m * primitive length
    double primitive = 0.0;
    int power = 1;
    int multiplicity = 0;
};

struct LengthSpectrum {
    std::vector<LengthEntry> primitives;
    double cutoff = 0.0;
    int genus = 2;

    std::vector<IterateEntry> iterates() const;  // all m * l <= cutoff, ordered by length
    double systole() const;
};

struct LengthSearchStats {
    long elements = 0;   // group elements kept for the class count
    long visited = 0;    // tiles visited by the search
    int layers = 0;
    double circumradius = 0.0;
};

// Primitive oriented closed geodesics with length <= L_max. The generators'
// Dirichlet half-planes at the origin must cut out a fundamental polygon.
// Classes are counted by the length of each axis inside that polygon.
LengthSpectrum length_spectrum(const FuchsianGroup& g, double L_max, int genus = 2,
                               long max_visited = 40000000, LengthSearchStats* stats = nullptr);

struct GaussianTestFn {
    double center = 0.0;
    double sigma = 1.0;
    double amplitude = 1.0;

    double operator()(double t) const;
    // integral of g(t) e^{i t r} dt over the real line; entire in r.
    cplx fourier(cplx r) const;
    // Fraction of the mass outside (0, cutoff).
    double leakage(double cutoff) const;
};

// Sum over closed orbits of l g(m l) / (4 sinh^2(m l / 2)). Throws
// CompletenessError when g has mass beyond the cutoff above 1e-12.
double flow_trace_geometric(const LengthSpectrum& ls, const GaussianTestFn& g);

struct TanhCheck {
    double pole_sum = 0.0;
    double closed_form = 0.0;
    double tail_bound = 0.0;  // bound on the omitted poles
};

// integral of r e^{itr} tanh(pi r) dr: residue sum over the first `terms` poles
// against -cosh(t/2) / (2 sinh^2(t/2)).
TanhCheck tanh_transform(double t, int terms = 50);

struct SelbergReport {
    double identity_term = 0.0;
    // Same term from the tanh kernel in t; only when g vanishes near t = 0 to 1e-14,
    // since the kernel is not locally integrable there.
    std::optional<double> identity_term_time_domain;
    double orbit_term = 0.0;
    double geometric_side = 0.0;
    std::optional<double> spectral_side;
    double discrepancy = 0.0;  // |spectral - geometric|, or the unresolved orbit mass estimate
    bool discrepancy_is_estimate = false;
    double cutoff = 0.0;
    double leakage = 0.0;
};

// Wave-trace pairing of the even extension of g. When the Laplace spectrum is
// absent the discrepancy is the estimated orbit mass beyond the cutoff,
// the integral of g(t) e^{t/2} over t > cutoff.
SelbergReport wave_trace_pair(const LengthSpectrum& ls, const std::optional<LaplaceSpectrum>& laplace,
                              const GaussianTestFn& g, bool strict = false);

struct WeylPoint {
    double s = 0.0;
    double heat_trace = 0.0;  // geometric-side estimate of sum exp(-mu_j s)
    double ratio = 0.0;       // heat_trace * s / (g - 1)
};

struct WeylReport {
    std::vector<WeylPoint> points;
    bool consistent = false;  // every ratio within 15% of 1 and every estimate positive
};

WeylReport weyl_consistency(const LengthSpectrum& ls, const std::vector<double>& s_grid);

}  // namespace gfsl
