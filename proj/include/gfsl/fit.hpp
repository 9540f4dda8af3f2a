#pragma once

#include <vector>

namespace gfsl {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;  // root-mean-square residual
};

// Ordinary least squares y ~ slope * x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gfsl
