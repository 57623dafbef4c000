#pragma once

#include <functional>
#include <stdexcept>

#include "weyl/util.hpp"

namespace weyl {

// Raised when an oscillatory integral would need more panels than the
// caller's budget allows (undersampling refusal, never silent degradation).
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Composite 8-point Gauss-Legendre on [a,b] split into `panels` equal panels.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int panels);
cplx integrate_gl_c(const std::function<cplx(double)>& f, double a, double b,
                    int panels);

// Panel count for an oscillatory integrand completing `cycles` full periods
// over the domain: >= 10 panels per period, and never fewer than min_panels
// (128 panels x 8 nodes = 2^10 node floor).  Throws QuadratureError when the
// requirement exceeds panel_budget.
int oscillatory_panels(double cycles, int min_panels = 128,
                       int panel_budget = 1 << 22);

// V(lambda) = int_0^1 e(-lambda t^d) dt, the scaled continuous multiplier.
// Direct composite Gauss-Legendre resolving every oscillation; refuses via
// QuadratureError when |lambda| is beyond the panel budget.
cplx vk_scaled(double lambda, int d, int panel_budget = 1 << 22);

// Fourier transform int_a^b p(t) e(-xi t) dt of a smooth compactly
// supported profile given as a callable.
cplx profile_ft(const std::function<double(double)>& p, double a, double b,
                double xi, int panel_budget = 1 << 22);

}  // namespace weyl
