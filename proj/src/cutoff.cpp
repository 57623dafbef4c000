#include "weyl/cutoff.hpp"

#include <cmath>

#include "weyl/quadrature.hpp"

namespace weyl {

double SampledProfile::mass() const {
    std::vector<double> v = values;
    return step * pairwise_sum(v);
}

namespace {

double sigma(double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_step(double x) {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    double a = sigma(x);
    return a / (a + sigma(1.0 - x));
}

double chi_hat_profile(double xi) {
    double a = std::abs(xi);
    if (a <= 0.25) return 1.0;
    if (a >= 0.5) return 0.0;
    // ramp 1 -> 0 across [1/4, 1/2]
    return smooth_step((0.5 - a) * 4.0);
}

double phi_profile(double t) {
    if (t <= 0.5 || t >= 4.0) return 0.0;
    if (t < 1.0) return smooth_step((t - 0.5) * 2.0);
    if (t <= 2.0) return 1.0;
    return smooth_step((4.0 - t) * 0.5);
}

double mu_weight_profile(double t, int d) {
    if (d < 2) throw std::invalid_argument("mu_weight_profile: degree must be >= 2");
    if (t <= 0.0 || t > 1.0) return 0.0;
    return std::pow(t, 1.0 / d - 1.0) / double(d);
}

double chi_time_profile(double t) {
    // chi(t) = int chi_hat(xi) e(xi t) dxi = 2 int_0^{1/2} chi_hat cos(2 pi xi t).
    // Integrand completes |t|/2 periods; resolve them all.
    int panels = oscillatory_panels(0.5 * std::abs(t), 32);
    return 2.0 * integrate_gl(
                     [t](double xi) {
                         return chi_hat_profile(xi) * std::cos(two_pi * xi * t);
                     },
                     0.0, 0.5, panels);
}

double phi_mass() {
    static const double m =
        integrate_gl([](double t) { return phi_profile(t); }, 0.5, 4.0, 256);
    return m;
}

SmoothCutoff make_cutoff(SmoothCutoff::Kind kind, int grid_resolution, int degree) {
    if (grid_resolution < 16)
        throw std::invalid_argument(
            "make_cutoff: grid_resolution must be >= 16 samples per unit");
    SmoothCutoff c;
    c.kind = kind;
    c.grid_resolution = grid_resolution;
    c.degree = degree;
    double h = 1.0 / grid_resolution;
    switch (kind) {
        case SmoothCutoff::Kind::chi: {
            // canonical samples: chi_hat on [-1/2, 1/2]
            c.samples.start = -0.5;
            c.samples.step = h;
            int n = grid_resolution + 1;
            c.samples.values.resize(n);
            for (int i = 0; i < n; ++i)
                c.samples.values[i] = chi_hat_profile(-0.5 + i * h);
            break;
        }
        case SmoothCutoff::Kind::phi: {
            c.samples.start = 0.5;
            c.samples.step = h;
            int n = int(std::lround(3.5 * grid_resolution)) + 1;
            c.samples.values.resize(n);
            for (int i = 0; i < n; ++i)
                c.samples.values[i] = phi_profile(0.5 + i * h);
            break;
        }
        case SmoothCutoff::Kind::mu_weight: {
            if (degree < 2)
                throw std::invalid_argument("make_cutoff: mu_weight needs degree >= 2");
            // open at 0: start one step in
            c.samples.start = h;
            c.samples.step = h;
            int n = grid_resolution;
            c.samples.values.resize(n);
            for (int i = 0; i < n; ++i)
                c.samples.values[i] = mu_weight_profile(h + i * h, degree);
            break;
        }
    }
    return c;
}

SmoothCutoff make_cutoff(const std::string& kind_name, int grid_resolution,
                         int degree) {
    if (kind_name == "chi") return make_cutoff(SmoothCutoff::Kind::chi, grid_resolution, degree);
    if (kind_name == "phi") return make_cutoff(SmoothCutoff::Kind::phi, grid_resolution, degree);
    if (kind_name == "mu-weight")
        return make_cutoff(SmoothCutoff::Kind::mu_weight, grid_resolution, degree);
    throw std::invalid_argument("make_cutoff: unknown cutoff kind '" + kind_name + "'");
}

SampledProfile dilate(const SmoothCutoff& c, int k, double tail_radius) {
    if (k < 0) throw std::invalid_argument("dilate: scale k must be >= 0");
    double h = 1.0 / c.grid_resolution;
    double scale = std::ldexp(1.0, -k);  // 2^{-k}
    SampledProfile out;
    out.step = h;
    switch (c.kind) {
        case SmoothCutoff::Kind::chi: {
            double half = tail_radius / scale;  // tail_radius * 2^k
            std::int64_t n = std::int64_t(std::ceil(half / h));
            out.start = -double(n) * h;
            out.values.resize(std::size_t(2 * n + 1));
            for (std::int64_t i = 0; i <= 2 * n; ++i) {
                double t = out.start + double(i) * h;
                out.values[std::size_t(i)] = scale * chi_time_profile(scale * t);
            }
            break;
        }
        case SmoothCutoff::Kind::phi: {
            double lo = 0.5 / scale, hi = 4.0 / scale;
            std::int64_t i0 = std::int64_t(std::floor(lo / h));
            std::int64_t i1 = std::int64_t(std::ceil(hi / h));
            out.start = double(i0) * h;
            out.values.resize(std::size_t(i1 - i0 + 1));
            for (std::int64_t i = i0; i <= i1; ++i)
                out.values[std::size_t(i - i0)] =
                    scale * phi_profile(scale * double(i) * h);
            break;
        }
        case SmoothCutoff::Kind::mu_weight: {
            double hi = 1.0 / scale;
            std::int64_t n = std::int64_t(std::ceil(hi / h));
            out.start = h;
            out.values.resize(std::size_t(n));
            for (std::int64_t i = 0; i < n; ++i)
                out.values[std::size_t(i)] =
                    scale * mu_weight_profile(scale * (h + double(i) * h), c.degree);
            break;
        }
    }
    return out;
}

}  // namespace weyl
