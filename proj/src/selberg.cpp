#include "gfsl/selberg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gfsl/errors.hpp"
#include "gfsl/parallel.hpp"

namespace gfsl {

namespace {

// Element [[a, b], [conj b, conj a]] of SU(1,1).
struct SU11 {
    cplx a{1.0, 0.0};
    cplx b{0.0, 0.0};
};

SU11 mul(const SU11& x, const SU11& y) {
    return {x.a * y.a + x.b * std::conj(y.b), x.a * y.b + x.b * std::conj(y.a)};
}

SU11 inverse(const SU11& x) { return {std::conj(x.a), -x.b}; }

using CMat2 = std::array<cplx, 4>;

CMat2 cmul(const CMat2& x, const CMat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

// Cayley matrix from the upper half-plane to the disk and its inverse.
const cplx kSqrt2i = std::sqrt(cplx(0.0, 2.0));
const CMat2 kCay = {1.0 / kSqrt2i, -kI / kSqrt2i, 1.0 / kSqrt2i, kI / kSqrt2i};
const CMat2 kCayInv = {kI / kSqrt2i, kI / kSqrt2i, -1.0 / kSqrt2i, 1.0 / kSqrt2i};

SU11 to_disk(const RealMat2& m) {
    CMat2 r = cmul(cmul(kCay, CMat2{m[0], m[1], m[2], m[3]}), kCayInv);
    return {r[0], r[1]};
}

RealMat2 to_real(const SU11& s) {
    CMat2 r = cmul(cmul(kCayInv, CMat2{s.a, s.b, std::conj(s.b), std::conj(s.a)}), kCay);
    return {r[0].real(), r[1].real(), r[2].real(), r[3].real()};
}

RealMat2 rmul(const RealMat2& x, const RealMat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

RealMat2 rinv(const RealMat2& x) {
    double det = x[0] * x[3] - x[1] * x[2];
    return {x[3] / det, -x[1] / det, -x[2] / det, x[0] / det};
}

double distance_from_origin(const SU11& s) {
    return std::acosh(std::max(1.0, 2.0 * std::norm(s.a) - 1.0));
}

cplx tile_center(const SU11& s) { return s.b / std::conj(s.a); }

// Points identified up to a fixed absolute tolerance on a hashed grid.
class PointSet {
public:
    bool contains(cplx z) const {
        auto [cx, cy] = cell(z);
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                auto it = map_.find(key(cx + dx, cy + dy));
                if (it != map_.end() && std::abs(it->second - z) < 10.0 * kEps) return true;
            }
        return false;
    }
    void insert(cplx z) {
        auto [cx, cy] = cell(z);
        map_.emplace(key(cx, cy), z);
    }
    std::size_t size() const { return map_.size(); }

private:
    static constexpr double kEps = 1e-9;
    static std::pair<std::int64_t, std::int64_t> cell(cplx z) {
        return {static_cast<std::int64_t>(std::floor(z.real() / kEps)),
                static_cast<std::int64_t>(std::floor(z.imag() / kEps))};
    }
    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(y);
    }
    std::unordered_multimap<std::uint64_t, cplx> map_;
};

struct HalfPlane {
    cplx u;    // unit normal in the Klein model
    double h;  // the side is {x : <x, u> = h}
};

double dot(cplx x, cplx y) { return x.real() * y.real() + x.imag() * y.imag(); }

// Dirichlet polygon at the origin from the side pairings.
std::vector<HalfPlane> dirichlet_polygon(const std::vector<SU11>& gens) {
    std::vector<HalfPlane> out;
    for (const auto& g : gens) {
        cplx p = tile_center(g);
        double d = 2.0 * std::atanh(std::abs(p));
        out.push_back({p / std::abs(p), std::tanh(0.5 * d)});
    }
    return out;
}

double polygon_circumradius(const std::vector<HalfPlane>& F) {
    double best = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i)
        for (std::size_t j = i + 1; j < F.size(); ++j) {
            double a = F[i].u.real(), b = F[i].u.imag(), c = F[j].u.real(), d = F[j].u.imag();
            double det = a * d - b * c;
            if (std::abs(det) < 1e-14) continue;
            cplx v((F[i].h * d - b * F[j].h) / det, (a * F[j].h - F[i].h * c) / det);
            bool inside = std::abs(v) < 1.0;
            for (const auto& s : F)
                if (dot(v, s.u) > s.h + 1e-12) inside = false;
            if (inside) best = std::max(best, std::abs(v));
        }
    if (best == 0.0) throw DomainError("fundamental polygon has no vertices");
    return std::atanh(best);
}

// Hyperbolic length of the part of the chord (a, b) inside F, halved when the
// chord runs along a side (the side is shared with a neighbouring tile).
double clipped_length(cplx a, cplx b, const std::vector<HalfPlane>& F) {
    double t0 = 0.0, t1 = 1.0;
    cplx d = b - a;
    for (const auto& s : F) {
        double num = s.h - dot(a, s.u);
        double den = dot(d, s.u);
        if (std::abs(den) < 1e-15) {
            if (num < -1e-12) return 0.0;
            continue;
        }
        double t = num / den;
        if (den > 0.0) t1 = std::min(t1, t);
        else t0 = std::max(t0, t);
    }
    if (t1 - t0 <= 1e-12) return 0.0;
    cplx P = a + t0 * d, Q = a + t1 * d;
    double len = 0.5 * std::log((std::abs(Q - a) * std::abs(b - P)) / (std::abs(P - a) * std::abs(b - Q)));
    for (const auto& s : F)
        if (std::abs(dot(P, s.u) - s.h) < 1e-9 && std::abs(dot(Q, s.u) - s.h) < 1e-9) return 0.5 * len;
    return len;
}

}  // namespace

double FuchsianGroup::relator_residual() const {
    RealMat2 p = {1.0, 0.0, 0.0, 1.0};
    for (int w : relator) {
        int i = std::abs(w) - 1;
        p = rmul(p, w > 0 ? generators.at(i) : rinv(generators.at(i)));
    }
    double plus = std::max({std::abs(p[0] - 1.0), std::abs(p[1]), std::abs(p[2]), std::abs(p[3] - 1.0)});
    double minus = std::max({std::abs(p[0] + 1.0), std::abs(p[1]), std::abs(p[2]), std::abs(p[3] + 1.0)});
    return std::min(plus, minus);
}

double FuchsianGroup::max_det_error() const {
    double e = 0.0;
    for (const auto& g : generators) e = std::max(e, std::abs(g[0] * g[3] - g[1] * g[2] - 1.0));
    return e;
}

FuchsianGroup bolza_group() {
    const double ch = 1.0 + std::sqrt(2.0);
    const double sh = std::sqrt(ch * ch - 1.0);
    SU11 T{ch, sh};
    FuchsianGroup g;
    for (int k = 0; k < 4; ++k) {
        double phi = k * kPi / 4.0;
        // R(phi) T R(-phi) with R(phi) = diag(e^{i phi/2}, e^{-i phi/2})
        SU11 gk{T.a, T.b * std::exp(kI * phi)};
        g.generators.push_back(to_real(gk));
    }
    g.relator = {1, -2, 3, -4, -1, 2, -3, 4};
    double res = g.relator_residual();
    if (res >= 1e-9) throw ConsistencyError("bolza_group: relator residual " + std::to_string(res));
    if (g.max_det_error() >= 1e-12) throw ConsistencyError("bolza_group: determinant drift");
    return g;
}

std::vector<IterateEntry> LengthSpectrum::iterates() const {
    std::vector<IterateEntry> out;
    for (const auto& p : primitives)
        for (int m = 1; m * p.length <= cutoff + 1e-9; ++m)
            out.push_back({m * p.length, p.length, m, p.multiplicity});
    std::sort(out.begin(), out.end(), [](const IterateEntry& x, const IterateEntry& y) {
        return x.length != y.length ? x.length < y.length : x.power < y.power;
    });
    return out;
}

double LengthSpectrum::systole() const {
    if (primitives.empty()) throw DomainError("empty length spectrum");
    return primitives.front().length;
}

LengthSpectrum length_spectrum(const FuchsianGroup& group, double L_max, int genus, long max_visited,
                               LengthSearchStats* stats) {
    if (!(L_max > 0.0 && L_max <= 8.0 + 1e-12))
        throw DomainError("length_spectrum: L_max must lie in (0, 8]");
    std::vector<SU11> gens;
    for (const auto& m : group.generators) gens.push_back(to_disk(m));
    const std::size_t n0 = gens.size();
    for (std::size_t i = 0; i < n0; ++i) gens.push_back(inverse(gens[i]));

    const std::vector<HalfPlane> F = dirichlet_polygon(gens);
    const double rv = polygon_circumradius(F);
    const double keep = L_max + 2.0 * rv;  // axis meets F and translation <= L_max
    const double prune = keep + rv;

    // Breadth-first search over tiles; neighbours of a layer lie in the
    // adjacent layers, so three layers suffice for deduplication.
    std::vector<SU11> elems;
    std::vector<SU11> cur{SU11{}};
    PointSet prev_set, cur_set, next_set;
    cur_set.insert(0.0);
    long visited = 1;
    int layers = 0;
    while (!cur.empty()) {
        std::vector<SU11> next;
        for (const auto& A : cur) {
            for (const auto& g : gens) {
                SU11 B = mul(A, g);
                double d = distance_from_origin(B);
                if (d > prune) continue;
                cplx z = tile_center(B);
                if (prev_set.contains(z) || cur_set.contains(z) || next_set.contains(z)) continue;
                next_set.insert(z);
                next.push_back(B);
                if (d <= keep) elems.push_back(B);
                if (++visited > max_visited)
                    throw BudgetError("length_spectrum: tile budget exhausted after " +
                                          std::to_string(layers) + " word-length layers",
                                      double(layers));
            }
        }
        prev_set = std::move(cur_set);
        cur_set = std::move(next_set);
        next_set = PointSet();
        cur = std::move(next);
        ++layers;
    }

    // Each class of translation length l contributes (primitive length) / l in total.
    std::vector<std::pair<double, double>> contrib(elems.size(), {0.0, 0.0});
    parallel_for(static_cast<int>(elems.size()), [&](int i) {
        const SU11& A = elems[i];
        double re = std::abs(A.a.real());
        if (re <= 1.0 + 1e-12) return;
        double ell = 2.0 * std::acosh(re);
        if (ell > L_max + 1e-9) return;
        double s = std::sqrt(re * re - 1.0);
        cplx bc = std::conj(A.b);
        cplx p = (kI * A.a.imag() + s) / bc, q = (kI * A.a.imag() - s) / bc;
        double w = clipped_length(p / std::abs(p), q / std::abs(q), F);
        if (w > 0.0) contrib[i] = {ell, w / ell};
    });
    std::vector<std::pair<double, double>> pts;
    for (const auto& c : contrib)
        if (c.second > 0.0) pts.push_back(c);
    std::sort(pts.begin(), pts.end());

    std::vector<std::pair<double, double>> clusters;  // (length, class count)
    for (const auto& [ell, w] : pts) {
        if (!clusters.empty() && ell - clusters.back().first < 1e-7) clusters.back().second += w;
        else clusters.push_back({ell, w});
    }

    LengthSpectrum ls;
    ls.cutoff = L_max;
    ls.genus = genus;
    for (const auto& [ell, c] : clusters) {
        double prim = c;
        for (const auto& p : ls.primitives)
            for (int m = 2; m * p.length <= ell + 1e-6; ++m)
                if (std::abs(m * p.length - ell) < 1e-6) prim -= double(p.multiplicity) / m;
        double r = std::round(prim);
        if (std::abs(prim - r) > 1e-4)
            throw ConsistencyError("length_spectrum: non-integral class count " + std::to_string(prim) +
                                   " at length " + std::to_string(ell));
        if (r >= 1.0) ls.primitives.push_back({ell, static_cast<int>(r)});
    }
    if (stats) {
        stats->elements = static_cast<long>(elems.size());
        stats->visited = visited;
        stats->layers = layers;
        stats->circumradius = rv;
    }
    return ls;
}

double GaussianTestFn::operator()(double t) const {
    double x = (t - center) / sigma;
    return amplitude * std::exp(-0.5 * x * x);
}

cplx GaussianTestFn::fourier(cplx r) const {
    return amplitude * sigma * std::sqrt(2.0 * kPi) * std::exp(-0.5 * sigma * sigma * r * r + kI * r * center);
}

double GaussianTestFn::leakage(double cutoff) const {
    double s = sigma * std::sqrt(2.0);
    return 0.5 * std::erfc((cutoff - center) / s) + 0.5 * std::erfc(center / s);
}

double flow_trace_geometric(const LengthSpectrum& ls, const GaussianTestFn& g) {
    double leak = g.leakage(ls.cutoff);
    if (leak > 1e-12) throw CompletenessError("flow_trace_geometric: test function mass beyond the cutoff", leak);
    double acc = 0.0;
    for (const auto& it : ls.iterates()) {
        double sh = std::sinh(0.5 * it.length);
        acc += it.multiplicity * it.primitive * g(it.length) / (4.0 * sh * sh);
    }
    return acc;
}

TanhCheck tanh_transform(double t, int terms) {
    if (!(t > 0.0)) throw DomainError("tanh_transform: t must be positive");
    TanhCheck c;
    for (int k = terms - 1; k >= 0; --k) c.pole_sum += -2.0 * (k + 0.5) * std::exp(-t * (k + 0.5));
    double sh = std::sinh(0.5 * t);
    c.closed_form = -0.5 * std::cosh(0.5 * t) / (sh * sh);
    double q = std::exp(-t);
    c.tail_bound = 2.0 * (terms + 1.5) * std::exp(-t * (terms + 0.5)) / ((1.0 - q) * (1.0 - q));
    return c;
}

SelbergReport wave_trace_pair(const LengthSpectrum& ls, const std::optional<LaplaceSpectrum>& laplace,
                              const GaussianTestFn& g, bool strict) {
    using boost::math::quadrature::gauss_kronrod;
    SelbergReport rep;
    rep.cutoff = ls.cutoff;
    rep.leakage = g.leakage(ls.cutoff);
    if (strict && rep.leakage > 1e-12)
        throw CompletenessError("wave_trace_pair: test function mass beyond the cutoff", rep.leakage);
    const double chi = 2.0 * ls.genus - 2.0;

    // |chi| * 2 * int_0^inf r tanh(pi r) Re G(r) dr
    const double rmax = std::sqrt(2.0 * 50.0) / g.sigma;
    auto f = [&](double r) { return r * std::tanh(kPi * r) * g.fourier(r).real(); };
    double id = gauss_kronrod<double, 61>::integrate(f, 0.0, rmax, 20, 1e-14);
    rep.identity_term = chi * 2.0 * id;

    // Same term from the kernel -cosh(t/2) / (2 sinh^2(t/2)) on t > 0.
    double lo = std::max(1e-3, g.center - 12.0 * g.sigma), hi = g.center + 12.0 * g.sigma;
    auto k = [&](double t) {
        double sh = std::sinh(0.5 * t);
        return g(t) * (-0.5 * std::cosh(0.5 * t) / (sh * sh));
    };
    if (g(0.0) < 1e-14 * std::abs(g.amplitude) && g(lo) < 1e-14 * std::abs(g.amplitude) * lo * lo)
        rep.identity_term_time_domain = chi * gauss_kronrod<double, 61>::integrate(k, lo, hi, 20, 1e-14);

    for (const auto& it : ls.iterates())
        rep.orbit_term += it.multiplicity * it.primitive * g(it.length) / (2.0 * std::sinh(0.5 * it.length));
    rep.geometric_side = rep.identity_term + rep.orbit_term;

    if (laplace) {
        cplx half_i(0.0, 0.5);
        cplx spectrum = g.fourier(half_i) + g.fourier(-half_i);
        for (const auto& e : laplace->entries) {
            cplx r = spectral_radius(e.mu);
            spectrum += double(e.multiplicity) * (g.fourier(r) + g.fourier(-r));
        }
        rep.spectral_side = spectrum.real();
        rep.discrepancy = std::abs(spectrum.real() - rep.geometric_side);
    } else {
        // Prime geodesic density: orbit term density ~ e^{t/2} for t beyond the cutoff.
        double a = std::max(ls.cutoff, g.center - 14.0 * g.sigma);
        double b = std::max(a, g.center + 14.0 * g.sigma);
        auto tail = [&](double t) { return g(t) * std::exp(0.5 * t); };
        rep.discrepancy = b > a ? gauss_kronrod<double, 61>::integrate(tail, a, b, 20, 1e-14) : 0.0;
        rep.discrepancy_is_estimate = true;
    }
    return rep;
}

WeylReport weyl_consistency(const LengthSpectrum& ls, const std::vector<double>& s_grid) {
    using boost::math::quadrature::gauss_kronrod;
    WeylReport rep;
    rep.consistent = true;
    const double gm1 = ls.genus - 1.0;
    for (double s : s_grid) {
        if (!(s > 0.0)) throw DomainError("weyl_consistency: s must be positive");
        // h(r) = exp(-s (r^2 + 1/4)), whose transform is a heat kernel in t.
        auto f = [&](double r) { return r * std::tanh(kPi * r) * std::exp(-s * (r * r + 0.25)); };
        double rmax = std::sqrt(50.0 / s);
        double id = gm1 * 2.0 * gauss_kronrod<double, 61>::integrate(f, 0.0, rmax, 20, 1e-14);
        double orb = 0.0;
        for (const auto& it : ls.iterates()) {
            double gs = std::exp(-0.25 * s - it.length * it.length / (4.0 * s)) / std::sqrt(4.0 * kPi * s);
            orb += it.multiplicity * it.primitive * gs / (2.0 * std::sinh(0.5 * it.length));
        }
        WeylPoint p{s, id + orb, (id + orb) * s / gm1};
        if (!(p.heat_trace > 0.0) || std::abs(p.ratio - 1.0) > 0.15) rep.consistent = false;
        rep.points.push_back(p);
    }
    return rep;
}

}  // namespace gfsl
