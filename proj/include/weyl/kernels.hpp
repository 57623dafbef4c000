#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "weyl/signal.hpp"

namespace weyl {

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Averaging kernel along degree-d powers at dyadic scale k:
//   rough:  2^{-k} sum_{n <= 2^k} delta_{n^d}
//   smooth: sum_n phi_k(n) delta_{n^d}, phi_k the L^1 dilation of the bump
//           phi (weights supported in n in [2^{k-1}, 2^{k+2}]).
struct PolynomialKernel {
    int d = 2;
    int k = 0;
    bool smooth = false;
    std::int64_t n_lo = 1;           // first n with nonzero weight
    std::vector<double> weights;     // weight of atom at n = n_lo + i
    std::vector<std::int64_t> atoms; // positions n^d, aligned with weights

    double mass() const;
};

PolynomialKernel build_kernel(int d, int k, bool smooth);

// Convolution K * f on Z.  Strategy: direct atom summation when
// atom_count * signal_length stays under direct_product_cap, else FFT on a
// zero-padded cyclic embedding.  budget_bytes caps the output allocation.
GridSignal convolve(const PolynomialKernel& K, const GridSignal& f,
                    std::size_t budget_bytes = std::size_t(1) << 31,
                    std::size_t direct_product_cap = 100'000'000);

// Pointwise sup over scales k = 0..k_max of |K_k * f| (dyadic maximal
// function).  full_n swaps the dyadic family for every N <= 2^{k_max}
// (brute force; only sensible for small inputs).
GridSignal maximal_operator(int d, int k_max, const GridSignal& f, bool smooth,
                            bool full_n = false,
                            std::size_t budget_bytes = std::size_t(1) << 31);

// Discrete Hardy-Littlewood maximal function on the window [out_lo, out_hi]:
// sup_{N >= 0} (2N+1)^{-1} sum_{|n| <= N} |f(x - n)|.
GridSignal hl_maximal(const GridSignal& f, std::int64_t out_lo, std::int64_t out_hi);

// V_k(xi) = int_0^1 e(-xi 2^{dk} t^d) dt (equals vk_scaled(2^{dk} xi, d)).
cplx evaluate_vk(int d, int k, double xi, int panel_budget = 1 << 22);

// max over xi samples of sum_{k in k_range} |V_k(xi) - phihat_{dk}(xi)|^2,
// phihat the transform of the mass-normalized bump (so both factors agree
// at xi = 0).  Propagates quadrature refusals.
double continuous_square_bound_check(int d, int k_min, int k_max,
                                     const std::vector<double>& xi_samples);

}  // namespace weyl
