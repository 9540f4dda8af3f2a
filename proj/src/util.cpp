#include <atomic>
#include <cmath>

#include "gfsl/errors.hpp"
#include "gfsl/fit.hpp"
#include "gfsl/parallel.hpp"

namespace gfsl {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_default_threads(unsigned n) { g_threads.store(n == 0 ? 1u : n); }
unsigned default_threads() { return g_threads.load(); }

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line: need two or more paired samples");
    double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("fit_line: abscissae are all equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - f.slope * x[i] - f.intercept;
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

}  // namespace gfsl
