#pragma once

#include <string>
#include <vector>

#include "weyl/util.hpp"

namespace weyl {

// Uniformly sampled real profile: values[i] sits at start + i*step.
struct SampledProfile {
    double start = 0;
    double step = 0;
    std::vector<double> values;

    double mass() const;  // step * sum(values)
};

// The three smooth weights the multiplier machinery is built from:
//   chi       - defined by its transform chi_hat: even, == 1 on [-1/4,1/4],
//               supported in [-1/2,1/2], smooth and monotone in between.
//   phi       - time-side bump: == 1 on [1,2], supported in [1/2,4].
//   mu_weight - the density t^{1/d-1}/d on (0,1] (degree-d change of
//               variables weight).
struct SmoothCutoff {
    enum class Kind { chi, phi, mu_weight };

    Kind kind;
    int grid_resolution;  // samples per unit interval
    int degree;           // only meaningful for mu_weight

    SampledProfile samples;  // canonical samples of the defining profile
};

// C-infinity step: 0 for x <= 0, 1 for x >= 1, strictly increasing between.
// s(x) = sigma(x) / (sigma(x) + sigma(1-x)) with sigma(x) = exp(-1/x).
double smooth_step(double x);

double chi_hat_profile(double xi);
double phi_profile(double t);
double mu_weight_profile(double t, int d);

// Time-side chi, recovered from chi_hat by quadrature (even, Schwartz-tailed).
double chi_time_profile(double t);

// Mass of phi (computed once by quadrature; chi has mass exactly chi_hat(0)=1).
double phi_mass();

SmoothCutoff make_cutoff(SmoothCutoff::Kind kind, int grid_resolution = 64,
                         int degree = 2);
// String entry point used by the CLI; unknown names are rejected.
SmoothCutoff make_cutoff(const std::string& kind_name, int grid_resolution = 64,
                         int degree = 2);

// L^1-normalized dilation of the cutoff's time-side kernel:
// k >= 0, returns samples of t -> 2^{-k} profile(2^{-k} t) on the dilated
// support at the cutoff's grid resolution.  For chi the time-side kernel is
// sampled out to |t| <= tail_radius * 2^k.
SampledProfile dilate(const SmoothCutoff& c, int k, double tail_radius = 40.0);

}  // namespace weyl
