#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gfsl/errors.hpp"
#include "gfsl/selberg.hpp"

using namespace gfsl;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

const LengthSpectrum& spectrum6() {
    static const LengthSpectrum ls = length_spectrum(bolza_group(), 6.0);
    return ls;
}

RealMat2 mul(const RealMat2& x, const RealMat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

RealMat2 inv(const RealMat2& x) { return {x[3], -x[1], -x[2], x[0]}; }

// Shortest translation length among words of length at most two.
double word_systole(const FuchsianGroup& g) {
    std::vector<RealMat2> letters;
    for (const auto& m : g.generators) {
        letters.push_back(m);
        letters.push_back(inv(m));
    }
    double best = INFINITY;
    auto consider = [&](const RealMat2& m) {
        double tr = std::abs(m[0] + m[3]);
        if (tr > 2.0 + 1e-9) best = std::min(best, 2.0 * std::acosh(0.5 * tr));
    };
    for (const auto& a : letters) {
        consider(a);
        for (const auto& b : letters) consider(mul(a, b));
    }
    return best;
}

// Rotation about i, which is the origin of the disk.
FuchsianGroup rotated(const FuchsianGroup& g, double phi) {
    RealMat2 k = {std::cos(0.5 * phi), std::sin(0.5 * phi), -std::sin(0.5 * phi), std::cos(0.5 * phi)};
    FuchsianGroup out = g;
    for (auto& m : out.generators) m = mul(mul(k, m), inv(k));
    return out;
}

void check_same(const LengthSpectrum& a, const LengthSpectrum& b) {
    REQUIRE(a.primitives.size() == b.primitives.size());
    for (std::size_t i = 0; i < a.primitives.size(); ++i) {
        CHECK(a.primitives[i].length == doctest::Approx(b.primitives[i].length).epsilon(1e-10));
        CHECK(a.primitives[i].multiplicity == b.primitives[i].multiplicity);
    }
}

}  // namespace

TEST_CASE("octagon group generators") {
    FuchsianGroup g = bolza_group();
    REQUIRE(g.generators.size() == 4);
    CHECK(g.relator_residual() < 1e-9);
    CHECK(g.max_det_error() < 1e-12);
    for (const auto& m : g.generators) CHECK(std::abs(m[0] + m[3]) == doctest::Approx(2.0 * (1.0 + kSqrt2)));

    FuchsianGroup bad = g;
    bad.relator = {1, 2, 3, 4, -1, -2, -3, -4};
    CHECK(bad.relator_residual() > 1e-3);
}

TEST_CASE("systole against word enumeration") {
    const double exact = 2.0 * std::acosh(1.0 + kSqrt2);
    FuchsianGroup g = bolza_group();
    CHECK(std::abs(word_systole(g) - exact) < 1e-9);
    CHECK(std::abs(spectrum6().systole() - exact) < 1e-9);
    CHECK(spectrum6().primitives.front().multiplicity == 24);
}

TEST_CASE("length table up to 8") {
    LengthSearchStats st;
    LengthSpectrum ls = length_spectrum(bolza_group(), 8.0, 2, 40000000, &st);
    // Unoriented counts 12, 12, 24, 48, 24, 24, 4, 48 for this surface.
    const int expected[] = {24, 24, 48, 96, 48, 48, 8, 96};
    REQUIRE(ls.primitives.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(ls.primitives[i].multiplicity == expected[i]);
    // 2 acosh(a + b sqrt 2) lengths.
    const double ab[][2] = {{1, 1}, {3, 2}, {5, 3}, {7, 5}, {9, 6}, {9, 7}, {11, 8}};
    for (int i = 0; i < 7; ++i)
        CHECK(std::abs(ls.primitives[i].length - 2.0 * std::acosh(ab[i][0] + ab[i][1] * kSqrt2)) < 1e-9);
    CHECK(st.elements > 0);
    CHECK(st.circumradius > 0.0);
    for (std::size_t i = 1; i < ls.primitives.size(); ++i)
        CHECK(ls.primitives[i].length > ls.primitives[i - 1].length);
}

TEST_CASE("length spectrum invariant under symmetries of the octagon") {
    FuchsianGroup g = bolza_group();
    FuchsianGroup perm = g;
    perm.generators = {g.generators[1], g.generators[2], g.generators[3], inv(g.generators[0])};
    check_same(spectrum6(), length_spectrum(perm, 6.0));
    check_same(spectrum6(), length_spectrum(rotated(g, std::numbers::pi / 4.0), 6.0));
    check_same(spectrum6(), length_spectrum(rotated(g, 0.37), 6.0));
}

TEST_CASE("iterates") {
    LengthSpectrum ls = spectrum6();
    ls.cutoff = 6.2;
    auto it = ls.iterates();
    REQUIRE(!it.empty());
    for (std::size_t i = 1; i < it.size(); ++i) CHECK(it[i].length >= it[i - 1].length);
    int doubles = 0;
    for (const auto& e : it) {
        CHECK(e.length <= ls.cutoff + 1e-9);
        CHECK(e.length == doctest::Approx(e.power * e.primitive));
        if (e.power == 2) ++doubles;
    }
    CHECK(doubles == 1);  // only the systole fits twice below 6.2
}

TEST_CASE("length spectrum budget") {
    CHECK_THROWS_AS(length_spectrum(bolza_group(), 6.0, 2, 100), BudgetError);
    try {
        length_spectrum(bolza_group(), 6.0, 2, 100);
    } catch (const BudgetError& e) {
        CHECK(e.progress() >= 0.0);
    }
    CHECK_THROWS_AS(length_spectrum(bolza_group(), 9.0), DomainError);
    CHECK_THROWS_AS(length_spectrum(bolza_group(), 0.0), DomainError);
}

TEST_CASE("flow trace geometric side") {
    const auto& ls = spectrum6();
    GaussianTestFn below{2.0, 0.1, 1.0};
    CHECK(std::abs(flow_trace_geometric(ls, below)) < 1e-20);

    const double l0 = ls.systole();
    GaussianTestFn single{l0, 0.1, 1.0};
    LengthSpectrum short_ls = length_spectrum(bolza_group(), 4.0);
    double sh = std::sinh(0.5 * l0);
    CHECK(flow_trace_geometric(short_ls, single) == doctest::Approx(24.0 * l0 / (4.0 * sh * sh)).epsilon(1e-12));

    GaussianTestFn beyond{5.0, 0.2, 1.0};
    CHECK_THROWS_AS(flow_trace_geometric(short_ls, beyond), CompletenessError);
}

TEST_CASE("tanh transform") {
    TanhCheck c = tanh_transform(2.0);
    CHECK(std::abs(c.pole_sum - c.closed_form) < 1e-12);
    CHECK(std::abs(c.pole_sum - c.closed_form) <= c.tail_bound);
    double prev = INFINITY;
    for (int terms : {5, 10, 20, 40}) {
        TanhCheck d = tanh_transform(1.0, terms);
        double err = std::abs(d.pole_sum - d.closed_form);
        CHECK(err < prev);
        CHECK(err <= d.tail_bound);
        prev = err;
    }
    CHECK_THROWS_AS(tanh_transform(0.0), DomainError);
}

TEST_CASE("identity term in both domains") {
    const auto& ls = spectrum6();
    // Support kept away from t = 0, where the kernel is singular.
    for (double c : {2.0, 3.0}) {
        GaussianTestFn g{c, 0.2, 1.0};
        SelbergReport r = wave_trace_pair(ls, std::nullopt, g);
        REQUIRE(r.identity_term_time_domain.has_value());
        CHECK(std::abs(r.identity_term - *r.identity_term_time_domain) < 1e-8 * std::abs(r.identity_term) + 1e-12);
    }
    GaussianTestFn wide{4.0, 1.0, 1.0};
    CHECK(!wave_trace_pair(ls, std::nullopt, wide).identity_term_time_domain.has_value());
}

TEST_CASE("spectral side with only the constant eigenfunction") {
    LaplaceSpectrum lap;
    lap.genus = 2;
    GaussianTestFn g{2.0, 0.3, 1.5};
    SelbergReport r = wave_trace_pair(spectrum6(), lap, g);
    REQUIRE(r.spectral_side.has_value());
    double expect = 2.0 * g.amplitude * g.sigma * std::sqrt(2.0 * std::numbers::pi) *
                    std::exp(g.sigma * g.sigma / 8.0) * std::cosh(0.5 * g.center);
    CHECK(*r.spectral_side == doctest::Approx(expect).epsilon(1e-12));
    CHECK(!r.discrepancy_is_estimate);
    CHECK(r.discrepancy == doctest::Approx(std::abs(expect - r.geometric_side)));
}

TEST_CASE("unresolved orbit mass shrinks with the cutoff") {
    GaussianTestFn g{4.0, 1.0, 1.0};
    double prev = INFINITY;
    for (double L : {5.0, 6.0}) {
        LengthSpectrum ls = L == 6.0 ? spectrum6() : length_spectrum(bolza_group(), L);
        SelbergReport r = wave_trace_pair(ls, std::nullopt, g);
        CHECK(r.discrepancy_is_estimate);
        CHECK(r.discrepancy < prev);
        CHECK(r.leakage > 0.0);
        prev = r.discrepancy;
    }
    CHECK_THROWS_AS(wave_trace_pair(spectrum6(), std::nullopt, g, true), CompletenessError);
}

TEST_CASE("heat trace consistency") {
    WeylReport w = weyl_consistency(spectrum6(), {0.05, 0.1, 0.15, 0.2});
    CHECK(w.consistent);
    REQUIRE(w.points.size() == 4);
    for (const auto& p : w.points) CHECK(std::abs(p.ratio - 1.0) < 0.15);
    CHECK_THROWS_AS(weyl_consistency(spectrum6(), {0.0}), DomainError);
}
