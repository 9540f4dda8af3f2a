#include "gfsl/global_traces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "gfsl/discrete.hpp"
#include "gfsl/errors.hpp"

namespace gfsl {

void LaplaceSpectrum::validate() const {
    if (genus < 2) throw DomainError("Laplace spectrum: genus must be at least 2");
    double prev = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (!(e.mu > 0.0)) throw DomainError("Laplace spectrum: mu must be positive (entry " + std::to_string(i) + ")");
        if (e.multiplicity < 1) throw DomainError("Laplace spectrum: multiplicity must be >= 1");
        if (i > 0 && !(e.mu > prev)) throw DomainError("Laplace spectrum: mu must be strictly increasing");
        prev = e.mu;
    }
    if (entries.empty()) return;
    double r2 = entries.back().mu - 0.25;
    if (r2 < 4.0) return;
    long count = 0;
    for (const auto& e : entries) count += e.multiplicity;
    double weyl = (genus - 1) * r2;
    double ratio = double(count) / weyl;
    if (ratio < 0.2 || ratio > 5.0)
        throw DomainError("Laplace spectrum: eigenvalue count " + std::to_string(count) +
                          " is inconsistent with the Weyl law estimate " + std::to_string(weyl));
}

cplx spectral_radius(double mu) {
    if (mu >= 0.25) return {std::sqrt(mu - 0.25), 0.0};
    return {0.0, std::sqrt(0.25 - mu)};
}

ResonanceSpectrum enumerate_resonances(const LaplaceSpectrum& spectrum, int n_max, int q_max) {
    if (n_max < 1 || q_max < 1) throw DomainError("enumerate_resonances: n_max and q_max must be >= 1");
    // Keyed by (-Re, Im) so equal values merge and the output order is fixed.
    std::map<std::pair<double, double>, Resonance> acc;
    auto add = [&](cplx v, int mult, int jordan) {
        auto key = std::make_pair(-v.real(), v.imag());
        auto it = acc.find(key);
        if (it == acc.end()) acc.emplace(key, Resonance{v, mult, jordan});
        else it->second.multiplicity += mult;
    };
    add(0.0, 1, 1);
    for (const auto& e : spectrum.entries) {
        cplx r = spectral_radius(e.mu);
        for (int n = 0; n <= n_max; ++n) {
            double base = -double(n) - 0.5;
            if (e.mu == 0.25) {
                add(base, e.multiplicity, 2);
            } else {
                add(base + kI * r, e.multiplicity, 1);
                add(base - kI * r, e.multiplicity, 1);
            }
        }
    }
    for (int j = 1; j <= n_max; ++j) {
        int mult = 0;
        for (int q = 1; q <= std::min(j, q_max); ++q) mult += 2 * rr_multiplicity(spectrum.genus, 2 * q);
        add(double(-j), mult, 1);
    }
    ResonanceSpectrum rs;
    for (auto& [k, v] : acc) rs.entries.push_back(v);
    return rs;
}

double global_trace(const LaplaceSpectrum& spectrum, double t, TraceForm form, int q_max) {
    if (!(t > 0.0)) throw DomainError("global_trace: t must be positive");
    const double x = std::exp(-t);
    double sph = 0.0;
    for (const auto& e : spectrum.entries) sph += e.multiplicity * std::cos(t * spectral_radius(e.mu)).real();
    double total = 1.0 + 2.0 * std::exp(-0.5 * t) / (1.0 - x) * sph;
    if (form == TraceForm::PreRR) {
        if (q_max < 1) throw DomainError("global_trace: q_max must be >= 1");
        double d = 0.0;
        for (int q = q_max; q >= 1; --q) d += rr_multiplicity(spectrum.genus, 2 * q) * std::exp(-t * q);
        total += 2.0 / (1.0 - x) * d;
    } else {
        double chi = 2.0 * spectrum.genus - 2.0;
        total += 2.0 * x / (1.0 - x) + chi * x * (1.0 + x) / std::pow(1.0 - x, 3);
    }
    return total;
}

std::vector<SemigroupBlock> block_semigroup(const BlockWindow& w, double t) {
    if (t < 0.0) throw DomainError("block_semigroup: t must be non-negative");
    std::vector<SemigroupBlock> out;
    for (int n = 0; n <= w.n_max; ++n) {
        const double shift = std::exp(-t * (n + 0.5));
        for (const auto& e : w.spectrum.entries) {
            SemigroupBlock b;
            b.label = e.mu;
            b.n = n;
            if (e.mu == 0.25) {
                b.kind = SemigroupBlock::Kind::Threshold;
                b.m = Mat2{{{shift, shift * t}, {0.0, shift}}};
            } else {
                cplx r = spectral_radius(e.mu);
                b.kind = SemigroupBlock::Kind::Wave;
                b.m = Mat2{{{shift * std::exp(kI * t * r), 0.0}, {0.0, shift * std::exp(-kI * t * r)}}};
            }
            out.push_back(b);
        }
        for (int q = 1; q <= w.q_max; ++q) {
            SemigroupBlock b;
            b.kind = SemigroupBlock::Kind::Discrete;
            b.label = q;
            b.n = n;
            b.dim = 1;
            b.m = Mat2{{{shift * std::exp(-t * (q - 0.5)), 0.0}, {0.0, 0.0}}};
            out.push_back(b);
        }
    }
    return out;
}

double resolvent_bound(cplx z, const ResonanceSpectrum& rs) {
    double d = INFINITY, dj = INFINITY;
    for (const auto& e : rs.entries) {
        double a = std::abs(z - e.value);
        d = std::min(d, a);
        if (e.jordan_size > 1) dj = std::min(dj, a);
    }
    if (!(d > 0.0)) throw DomainError("resolvent_bound: z lies in the spectrum");
    double b = 1.0 / d;
    if (std::isfinite(dj)) b += 1.0 / (dj * dj);
    return b;
}

}  // namespace gfsl
