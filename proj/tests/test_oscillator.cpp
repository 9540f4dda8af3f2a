#include <cmath>
#include <random>

#include "doctest.h"
#include "gfsl/errors.hpp"
#include "gfsl/oscillator.hpp"
#include "support.hpp"

using namespace gfsl;

TEST_CASE("t_plus of the standard Gaussian") {
    GaussPolyFunction g({1.0}, 1.0);
    auto t = t_plus(g, 4);
    CHECK(std::abs(t[0] - 1.0) < 1e-15);
    CHECK(std::abs(t[1]) == 0.0);
    CHECK(std::abs(t[2] + 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(t[4] - 3.0 / std::sqrt(24.0)) < 1e-15);
}

TEST_CASE("t_plus of x e^{-x^2/2}") {
    auto t = t_plus(GaussPolyFunction({0.0, 1.0}, 1.0), 3);
    CHECK(std::abs(t[0]) == 0.0);
    CHECK(std::abs(t[1] - 1.0) < 1e-15);
}

TEST_CASE("t_plus against repeated symbolic differentiation") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        GaussPolyFunction u = support::random_gauss_poly(rng);
        auto t = t_plus(u, 12);
        GaussPolyFunction d = u;
        double sf = 1.0;
        for (int n = 0; n <= 12; ++n) {
            if (n > 0) sf *= std::sqrt(double(n));
            cplx oracle = d(0.0) / sf;
            CHECK(std::abs(t[n] - oracle) <= 1e-12 * std::max(1.0, std::abs(oracle)));
            d = d.derivative();
        }
    }
}

TEST_CASE("t_minus moments") {
    GaussPolyFunction g({1.0}, 1.0);
    auto t = t_minus(g, 5);
    CHECK(std::abs(t[0] - std::sqrt(2.0 * kPi)) < 1e-14);
    CHECK(std::abs(t[1]) == 0.0);
    CHECK(std::abs(t[3]) == 0.0);
    auto t2 = t_minus(GaussPolyFunction({0.0, 0.0, 1.0}, 1.0), 2);
    CHECK(std::abs(t2[0] - std::sqrt(2.0 * kPi)) < 1e-14);
    CHECK(std::abs(t2[2] - 3.0 * std::sqrt(2.0 * kPi) / std::sqrt(2.0)) < 1e-13);
}

TEST_CASE("t_minus against trapezoid quadrature") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        GaussPolyFunction u = support::random_gauss_poly(rng);
        auto t = t_minus(u, 6);
        double L = 14.0 / std::sqrt(u.width.real());
        const int P = 4000;
        double h = 2.0 * L / P, sf = 1.0;
        for (int n = 0; n <= 6; ++n) {
            if (n > 0) sf *= std::sqrt(double(n));
            cplx acc = 0.0;
            for (int j = 0; j <= P; ++j) {
                double x = -L + j * h;
                acc += (j == 0 || j == P ? 0.5 : 1.0) * std::pow(x, n) * u(x);
            }
            cplx oracle = acc * h / sf;
            CHECK(std::abs(t[n] - oracle) <= 1e-10 * std::max(1.0, std::abs(oracle)));
        }
    }
}

TEST_CASE("linearity") {
    std::mt19937_64 rng(3);
    GaussPolyFunction u = support::random_gauss_poly(rng);
    cplx c(0.3, -2.0);
    auto a = t_plus(u, 8), b = t_plus(u.scaled(c), 8);
    for (int n = 0; n <= 8; ++n) CHECK(std::abs(b[n] - c * a[n]) <= 1e-14 * std::max(1.0, std::abs(b[n])));
}

TEST_CASE("ladder and generator intertwining on random functions") {
    std::mt19937_64 rng(2024);
    double ladder = 0.0, gen = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto r = support::oscillator_residual(support::random_gauss_poly(rng), 24);
        ladder = std::max(ladder, r.ladder);
        gen = std::max(gen, r.generator);
    }
    CHECK(ladder < 1e-11);
    CHECK(gen < 1e-11);
}

TEST_CASE("gaussian_flow") {
    auto r0 = gaussian_flow(cplx(0.6, 0.2), 0.0);
    CHECK(std::abs(r0.beta - cplx(0.6, 0.2)) == 0.0);
    CHECK(std::abs(r0.prefactor - 1.0) < 1e-15);
    auto r = gaussian_flow(kPi / 4, kPi / 8);
    CHECK(std::abs(r.prefactor - std::sqrt(std::sin(kPi / 4) / std::sin(3 * kPi / 8))) < 1e-15);
    auto back = gaussian_flow(r.beta, -kPi / 8);
    CHECK(std::abs(back.beta - kPi / 4) < 1e-14);
    CHECK(std::abs(back.prefactor * r.prefactor - 1.0) < 1e-14);
    CHECK_THROWS_AS(gaussian_flow(1.2, 0.5), DomainError);
    CHECK_THROWS_AS(gaussian_flow(-0.1, 0.5), DomainError);
}

TEST_CASE("ladder algebra on truncated sequences") {
    CoeffVector v(12);
    for (int n = 0; n < 12; ++n) v[n] = cplx(std::cos(n), std::sin(2.0 * n));
    auto aa = apply_raise(apply_lower(v));
    auto A = apply_number(v);
    auto comm_a = apply_lower(apply_raise(v));
    for (int n = 0; n < 11; ++n) {
        CHECK(std::abs(aa[n] - A[n]) < 1e-13);
        CHECK(std::abs(comm_a[n] - aa[n] - v[n]) < 1e-13);
    }
}

TEST_CASE("width must have positive real part") {
    CHECK_THROWS_AS(GaussPolyFunction({1.0}, cplx(-0.1, 1.0)), DomainError);
}
