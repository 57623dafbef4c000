#include "weyl/quadrature.hpp"

#include <cmath>

namespace weyl {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double gl8_x[4] = {0.1834346424956498, 0.5255324099163290,
                             0.7966664774136267, 0.9602898564975362};
constexpr double gl8_w[4] = {0.3626837833783620, 0.3137066458778873,
                             0.2223810344533745, 0.1012285362903763};

}  // namespace

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int panels) {
    if (panels < 1) throw std::invalid_argument("integrate_gl: panels < 1");
    double h = (b - a) / panels;
    double total = 0;
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h;
        double half = 0.5 * h;
        double s = 0;
        for (int i = 0; i < 4; ++i) {
            double dx = half * gl8_x[i];
            s += gl8_w[i] * (f(mid + dx) + f(mid - dx));
        }
        total += s * half;
    }
    return total;
}

cplx integrate_gl_c(const std::function<cplx(double)>& f, double a, double b,
                    int panels) {
    if (panels < 1) throw std::invalid_argument("integrate_gl_c: panels < 1");
    double h = (b - a) / panels;
    kahan_sum acc;
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h;
        double half = 0.5 * h;
        cplx s = 0;
        for (int i = 0; i < 4; ++i) {
            double dx = half * gl8_x[i];
            s += gl8_w[i] * (f(mid + dx) + f(mid - dx));
        }
        acc.add(s * half);
    }
    return acc.value();
}

int oscillatory_panels(double cycles, int min_panels, int panel_budget) {
    double need = 10.0 * std::abs(cycles);
    if (need > double(panel_budget))
        throw QuadratureError(
            "oscillatory quadrature refused: " + std::to_string(need) +
            " panels needed to keep >=10 panels per period, budget " +
            std::to_string(panel_budget));
    int p = int(std::ceil(need));
    return p < min_panels ? min_panels : p;
}

cplx vk_scaled(double lambda, int d, int panel_budget) {
    if (d < 2) throw std::invalid_argument("vk_scaled: degree must be >= 2");
    if (lambda == 0.0) return {1.0, 0.0};
    // Phase lambda*t^d sweeps |lambda| full periods on [0,1]; the local
    // frequency peaks at d*|lambda|, so budget panels against that.
    int panels = oscillatory_panels(lambda * d, 128, panel_budget);
    return integrate_gl_c(
        [lambda, d](double t) { return unit_phase(-lambda * std::pow(t, d)); }, 0.0,
        1.0, panels);
}

cplx profile_ft(const std::function<double(double)>& p, double a, double b,
                double xi, int panel_budget) {
    // Floor scaled to the window so the profile itself is resolved even when
    // the phase is slow; the oscillation requirement adds panels on top.
    int floor_panels = int(24.0 * (b - a)) + 16;
    int panels = oscillatory_panels(xi * (b - a), floor_panels, panel_budget);
    return integrate_gl_c([&p, xi](double t) { return p(t) * unit_phase(-xi * t); },
                          a, b, panels);
}

}  // namespace weyl
