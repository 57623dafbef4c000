#pragma once

#include <cstdint>
#include <vector>

#include "weyl/fit.hpp"
#include "weyl/signal.hpp"
#include "weyl/weyl_sums.hpp"

namespace weyl {

// Smallest scale at which the arc family {Q <= 2^{ck}, halfwidth
// 2^{-(d-c)k}/2} is safely disjoint: 2^{ck+1} < 2^{(d-c)k}.
int approximant_k_min(int d, double c);

// Sum of dilated plateau bumps over the reduced rationals with small
// denominator: Pi_k(beta) = sum_{Q <= 2^{ck}} chi_hat(2^{(d-c)k}(beta - A/Q)).
// Errors out if the arc supports overlap instead of silently adding.
double pi_multiplier(int d, int k, double c, double beta);

struct ApproximantTerm {
    RationalFreq freq;
    cplx weight;  // S(A/Q)
};

// Frequency-side major-arc model of the smooth kernel transform:
//   Lhat(beta) = sum_terms S(A/Q) chi_hat(2^{(d-c)k}(beta-A/Q))
//                          phihat'(2^{dk}(beta-A/Q))
// with phi'(s) = phi(s^{1/d}) / (d s^{1-1/d}).
struct MajorArcApproximant {
    int d = 2;
    int k = 0;
    double c = 0.2;
    std::size_t candidate_count = 0;  // sum of phi(Q), before zero-weight drop
    std::vector<ApproximantTerm> terms;  // sorted by frequency, |S| > 0 only

    double arc_halfwidth() const;  // support radius of each chi_hat bump
    cplx evaluate(double beta) const;
};

MajorArcApproximant build_approximant(int d, int k, double c,
                                      WeylCache* cache = nullptr);

// Transform of the degree-d change-of-variable bump phi'.
cplx phi_prime_ft(int d, double xi);

// Terms of the approximant whose denominators lie in the dyadic shell
// [2^{s-1}, 2^s).
std::vector<ApproximantTerm> shell_terms(const MajorArcApproximant& ap, int s);

struct MultiplierErrorRow {
    int k = 0;
    double sup_error = 0;      // max |Khat' - Lhat'| over the hybrid grid
    std::size_t grid_points = 0;
};

// Sup of |Khat'_k - Lhat'_k| over the uniform grid of step 2^{-dk-3} plus
// refine_per_arc geometrically clustered nodes inside each arc.
MultiplierErrorRow multiplier_error(int d, int k, double c,
                                    int refine_per_arc = 64,
                                    WeylCache* cache = nullptr);

struct MultiplierErrorScan {
    std::vector<MultiplierErrorRow> rows;
    DecayFit fit;  // log2 sup_error vs k
};

MultiplierErrorScan multiplier_error_scan(int d, int k_lo, int k_hi, double c,
                                          int refine_per_arc = 64);

// Cyclic-model check of sup_k |(K'_k - L'_k) * f| against the square-function
// budget sup_beta sum_k |mhat_k|^2.  Returns LHS / RHS (0 when both vanish).
double residual_maximal_ratio(int d, double c, int k_lo, int k_hi,
                              const CyclicSignal& f);

// Exact transform samples Khat'_k(j/M) for j = 0..M-1 via the periodized
// atom vector (shared by the residual check and tests).
std::vector<cplx> smooth_kernel_multiplier(int d, int k, std::size_t M);

}  // namespace weyl
