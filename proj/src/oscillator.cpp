#include "gfsl/oscillator.hpp"

#include <cmath>

#include "gfsl/errors.hpp"

namespace gfsl {

GaussPolyFunction::GaussPolyFunction(std::vector<cplx> p, cplx w) : poly(std::move(p)), width(w) {
    if (!(width.real() > 0.0)) throw DomainError("GaussPolyFunction: width must have Re > 0");
}

GaussPolyFunction GaussPolyFunction::times_x() const {
    std::vector<cplx> p(poly.size() + 1, 0.0);
    for (std::size_t j = 0; j < poly.size(); ++j) p[j + 1] = poly[j];
    return {std::move(p), width};
}

GaussPolyFunction GaussPolyFunction::derivative() const {
    // (P e^{-w x^2/2})' = (P' - w x P) e^{-w x^2/2}
    std::vector<cplx> p(poly.size() + 1, 0.0);
    for (std::size_t j = 1; j < poly.size(); ++j) p[j - 1] += double(j) * poly[j];
    for (std::size_t j = 0; j < poly.size(); ++j) p[j + 1] -= width * poly[j];
    return {std::move(p), width};
}

GaussPolyFunction GaussPolyFunction::euler() const {
    GaussPolyFunction d = derivative().times_x();
    for (std::size_t j = 0; j < poly.size(); ++j) d.poly[j] += 0.5 * poly[j];
    return d;
}

GaussPolyFunction GaussPolyFunction::scaled(cplx c) const {
    std::vector<cplx> p(poly);
    for (auto& v : p) v *= c;
    return {std::move(p), width};
}

cplx GaussPolyFunction::operator()(double x) const {
    cplx acc = 0.0;
    for (std::size_t j = poly.size(); j-- > 0;) acc = acc * x + poly[j];
    return acc * std::exp(-0.5 * width * x * x);
}

CoeffVector t_plus(const GaussPolyFunction& u, int n_max) {
    // Taylor coefficients of the Gaussian factor: g_{2m} = (-w/2)^m / m!.
    std::vector<cplx> g(static_cast<std::size_t>(n_max) + 1, 0.0);
    cplx term = 1.0;
    for (int m = 0; 2 * m <= n_max; ++m) {
        g[2 * m] = term;
        term *= -0.5 * u.width / double(m + 1);
    }
    CoeffVector out(g.size(), 0.0);
    double sqrt_fact = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) sqrt_fact *= std::sqrt(double(n));
        cplx c = 0.0;
        for (int j = 0; j <= n && j < static_cast<int>(u.poly.size()); ++j) c += u.poly[j] * g[n - j];
        out[n] = c * sqrt_fact;
    }
    return out;
}

CoeffVector t_minus(const GaussPolyFunction& u, int n_max) {
    int top = n_max + static_cast<int>(u.poly.size());
    std::vector<cplx> mom(static_cast<std::size_t>(top) + 1, 0.0);
    mom[0] = std::sqrt(2.0 * kPi / u.width);
    for (int n = 0; n + 2 <= top; n += 2) mom[n + 2] = double(n + 1) / u.width * mom[n];
    CoeffVector out(static_cast<std::size_t>(n_max) + 1, 0.0);
    double inv_sqrt_fact = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) inv_sqrt_fact /= std::sqrt(double(n));
        cplx c = 0.0;
        for (std::size_t j = 0; j < u.poly.size(); ++j) c += u.poly[j] * mom[n + j];
        out[n] = c * inv_sqrt_fact;
    }
    return out;
}

GaussianFlowResult gaussian_flow(cplx beta, double alpha) {
    cplx nb = beta + alpha;
    auto in_strip = [](cplx b) { return b.real() > 0.0 && b.real() < 0.5 * kPi; };
    if (!in_strip(beta) || !in_strip(nb))
        throw DomainError("gaussian_flow: width parameter leaves the strip 0 < Re < pi/2");
    // Re sin > 0 throughout the strip, so principal logs are continuous there.
    cplx pre = std::exp(0.5 * (std::log(std::sin(beta)) - std::log(std::sin(nb))));
    return {nb, pre};
}

CoeffVector apply_raise(const CoeffVector& v) {
    CoeffVector out(v.size(), 0.0);
    for (std::size_t n = 1; n < v.size(); ++n) out[n] = std::sqrt(double(n)) * v[n - 1];
    return out;
}

CoeffVector apply_lower(const CoeffVector& v) {
    CoeffVector out(v.size(), 0.0);
    for (std::size_t n = 0; n + 1 < v.size(); ++n) out[n] = std::sqrt(double(n + 1)) * v[n + 1];
    return out;
}

CoeffVector apply_number(const CoeffVector& v) {
    CoeffVector out(v.size(), 0.0);
    for (std::size_t n = 0; n < v.size(); ++n) out[n] = double(n) * v[n];
    return out;
}

}  // namespace gfsl
