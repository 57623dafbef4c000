#pragma once

#include <cstdint>
#include <vector>

#include "weyl/fit.hpp"
#include "weyl/signal.hpp"

namespace weyl {

// Grid-aligned frequencies on Z_M (alignment is enforced by the integer
// type: modulation by an integer frequency is exact on the grid).  `unit`
// is the number of grid cells making up one separation unit; frequencies
// must be pairwise more than `unit` cells apart circularly.
struct FrequencySet {
    std::vector<std::int64_t> thetas;  // sorted, in [0, M)
    std::int64_t unit = 1;
    std::size_t modulus = 0;

    void validate() const;
};

// Sequential rejection sampling: draw grid frequencies uniformly, keep one
// when it is more than `unit` cells from everything kept so far.
FrequencySet random_frequency_set(std::size_t count, std::size_t M,
                                  std::int64_t unit, std::uint64_t seed);

// Signed circular distance from j to 0 on Z_M, in [-M/2, M/2).
std::int64_t circ_dist(std::int64_t j, std::size_t M);

// Band profile at scale k: chi_hat(2^k * dist / unit), so the band around
// each frequency narrows as k grows and is exactly zero outside
// |dist| <= unit / 2^{k+1}.
double band_profile(int k, std::int64_t dist_cells, std::int64_t unit);

// Smallest admissible scale: 2^k >= 8.
int default_k_floor();
// Scale floor for a frequency count: smallest k with 2^k >= 4 * log2(N)^2
// (and never below default_k_floor).
int truncation_k_floor(std::size_t n_freqs);
// Largest useful scale: the band narrows to the center cell at
// k = floor(log2 unit).
int top_scale(const FrequencySet& th);
// Even scales in [k_lo, k_hi] (parity-sparsified family).
std::vector<int> parity_scales(int k_lo, int k_hi);

struct MultiFreqState {
    FrequencySet thetas;
    CyclicSignal f;
    CyclicSignal fhat;
    // Base band pieces chi * (Mod_{-theta} f), one per frequency, physical
    // side, plus their transforms; empty when built with_bandpieces=false.
    std::vector<CyclicSignal> bandpieces;
    std::vector<CyclicSignal> bandpiece_hats;
};

MultiFreqState make_state(FrequencySet thetas, CyclicSignal f,
                          bool with_bandpieces = true);

// Multiplier of the multi-frequency smoothing operator at scale k:
// sum_n band_profile(k, j - theta_n).  Bands are disjoint for 1-separated
// frequencies, so the sup over j is at most 1 exactly.
double xi_multiplier(const FrequencySet& th, int k, std::int64_t j);
double xi_multiplier_sup(const FrequencySet& th, int k);

// The operator itself, two independent routes (agree to 1e-8):
// frequency side multiplies fhat by the multiplier; physical side sums
// e(theta x / M) (chi_k * f_theta)(x) over the band pieces.
CyclicSignal xi_apply_frequency(const MultiFreqState& st, int k);
CyclicSignal xi_apply_physical(const MultiFreqState& st, int k);

// sup_xi sum_n |chi_hat(xi - theta_n)|^2 over the grid (band overlap
// diagnostic; <= 1 for separated frequencies).
double band_overlap_sup(const FrequencySet& th);

// F(x) = sqrt(sum_n sup_{k_floor <= k <= top} |chi_k * f_theta_n(x)|^2);
// needs band pieces.
CyclicSignal vector_maximal_F(const MultiFreqState& st, int k_floor);

// Pointwise sup over the given scales of |Xi_k f|.
CyclicSignal multifreq_maximal(const MultiFreqState& st,
                               const std::vector<int>& scales);

// ||sum a_n e(theta_n x / M)||^2 over the window [x0, x0+len) divided by
// len * sum |a_n|^2.  Refuses windows shorter than the separation unit.
double local_orthogonality_check(const FrequencySet& th,
                                 const std::vector<cplx>& coeffs,
                                 std::int64_t x0, std::size_t len);

// Hardy-Littlewood maximal function on Z_M (all window radii up to M/2);
// quadratic cost, guarded by a size cap.
CyclicSignal cyclic_hl_maximal(const CyclicSignal& f);

struct SmoothnessRow {
    double truncated_quotient = 0;    // scales >= truncation floor
    double untruncated_quotient = 0;  // scales >= default floor
};

// Max over adjacent grid points of |F(x+1) - F(x)| / HL f(x) for the
// vector maximal function, with and without the log^2-driven scale floor.
SmoothnessRow smoothness_check_F(const MultiFreqState& st);

struct Log2NRow {
    std::size_t n_freqs = 0;
    double max_ratio = 0;   // max over trials of ||max-op f||_2 / ||f||_2
    double normalized = 0;  // max_ratio / (1 + log2(N)^2)
    std::vector<int> scales;
};

struct Log2NResult {
    std::vector<Log2NRow> rows;
    DecayFit fit;  // max_ratio against 1 + log2(N)^2
};

// Norm-growth experiment: per N draw 1-separated frequency sets and random
// signals, apply the parity-sparsified maximal operator over the truncated
// scale range, record the worst ratio.  Deterministic in seed.
Log2NResult log2n_experiment(const std::vector<std::size_t>& n_list, int trials,
                             std::size_t M, std::int64_t unit,
                             std::uint64_t seed);

}  // namespace weyl
