#pragma once

#include <cstdint>
#include <vector>

#include "weyl/signal.hpp"

namespace weyl {

// Conditional expectation on the dyadic blocks [m 2^k, (m+1) 2^k) of Z,
// in absolute coordinates; blocks are clipped to the signal window, so
// window sums are preserved, E_k is idempotent, and E_j E_k = E_j for j >= k.
GridSignal dyadic_expectation(const GridSignal& f, int k);

// Cyclic version; 2^k must divide the modulus so the blocks tile.
CyclicSignal dyadic_expectation(const CyclicSignal& f, int k);

// chi_k * f on Z_M: kernel samples 2^{-k} chi(2^{-k} n) truncated at
// |n| <= tail_radius * 2^k and wrapped mod M.
CyclicSignal smooth_scale_cyclic(const CyclicSignal& f, int k,
                                 double tail_radius = 40.0);

enum class ScaleFamilyKind { martingale, convolution };

struct LepingleResult {
    double max_ratio = 0;  // max over trials
    std::vector<double> trial_ratios;
};

// Random-trial variation bound: per trial draw a real signal, build the
// scale family {E_k f} (martingale) or {chi_k * f} (convolution), take the
// pointwise r-variation across scales, and record
// ||Vr||_2 / (r/(r-2) ||f||_2).  Trials are seeded per index, so runs with
// different r on the same seed see identical signals.
LepingleResult lepingle_check(ScaleFamilyKind kind, int trials,
                              std::size_t path_length, double r,
                              std::uint64_t seed);

struct RademacherMenshovRow {
    std::size_t family_size = 0;
    double max_ratio = 0;   // max over trials of ||max_j |F_j - F_0|||_2 / A
    double normalized = 0;  // max_ratio / (1 + log2(size)^2)
};

// Filtration that refines one block per step (largest block first, split at
// its midpoint), giving martingale families of any size up to len.  Per
// family size: ratio of the maximal deviation from F_0 to the square
// function A = (sum ||F_j - F_{j-1}||^2)^{1/2}.
std::vector<RademacherMenshovRow> rademacher_menshov_scan(
    const std::vector<std::size_t>& family_sizes, int trials, std::size_t len,
    std::uint64_t seed);

// Real function sampled on an x-by-t rectangle (t uniform, strictly
// increasing), row-major by x.
struct RectField {
    std::vector<double> t;
    std::size_t nx = 0;
    std::vector<double> values;  // nx * t.size()

    double at(std::size_t ix, std::size_t it) const {
        return values[ix * t.size() + it];
    }
};

// Embedding check: max over x of
//   sup_t |F(x,t)| - 2|F(x,t_anchor)| - 2 (int |F|^2 dt)^{1/4} (int |dF/dt|^2 dt)^{1/4},
// derivatives by centered differences (one-sided at the ends), integrals by
// trapezoid.  Nonpositive up to quadrature error when the inequality holds.
// Refuses t-grids too coarse for a stable derivative.
double sobolev_embedding_check(const RectField& F, std::size_t t_anchor);

}  // namespace weyl
