#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace weyl {

// Least-squares line fit y ~ slope*x + intercept with RMS residual.
// Callers pass log-transformed data when they want power-law slopes.
struct DecayFit {
    double slope = 0;
    double intercept = 0;
    double residual_rms = 0;
    std::size_t n = 0;
};

inline DecayFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matched samples");
    std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
    DecayFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.n = n;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.slope * x[i] + f.intercept);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / double(n));
    return f;
}

}  // namespace weyl
