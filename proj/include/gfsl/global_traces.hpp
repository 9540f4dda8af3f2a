#pragma once

#include <array>
#include <string>
#include <vector>

#include "gfsl/specfun.hpp"

namespace gfsl {

struct LaplaceEntry {
    double mu = 0.0;
    int multiplicity = 1;
};

// Nonzero Laplace eigenvalues (constants are implicit) of a genus g surface.
struct LaplaceSpectrum {
    std::vector<LaplaceEntry> entries;
    int genus = 2;

    // Strictly increasing mu > 0, multiplicities >= 1, and a loose Weyl-law
    // count check when the data reach R = sqrt(mu_max - 1/4) >= 2.
    void validate() const;
};

struct Resonance {
    cplx value;
    int multiplicity = 1;
    int jordan_size = 1;
};

struct ResonanceSpectrum {
    std::vector<Resonance> entries;
};

// Resonances with Re >= -(n_max + 1/2): spherical -n-1/2 +- i sqrt(mu-1/4),
// discrete -j with multiplicity sum_{q <= min(j, q_max)} 2 m_{2q}, and 0.
ResonanceSpectrum enumerate_resonances(const LaplaceSpectrum& spectrum, int n_max, int q_max);

enum class TraceForm { PreRR, PostRR };

double global_trace(const LaplaceSpectrum& spectrum, double t, TraceForm form, int q_max = 200);

// sqrt(mu - 1/4), taken as i sqrt(1/4 - mu) below the threshold.
cplx spectral_radius(double mu);

using Mat2 = std::array<std::array<cplx, 2>, 2>;

struct SemigroupBlock {
    enum class Kind { Wave, Threshold, Discrete } kind;
    double label = 0.0;  // mu for spherical blocks, q for discrete ones
    int n = 0;           // shift index
    int dim = 2;         // 1 for discrete blocks
    Mat2 m{};
};

struct BlockWindow {
    LaplaceSpectrum spectrum;
    int n_max = 4;
    int q_max = 4;
};

// e^{t X_B} block by block: e^{-t(n+1/2)} times the wave, threshold or discrete factor.
std::vector<SemigroupBlock> block_semigroup(const BlockWindow& w, double t);

double resolvent_bound(cplx z, const ResonanceSpectrum& rs);

}  // namespace gfsl
