#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weyl/fit.hpp"
#include "weyl/util.hpp"

namespace weyl {

// Reduced rational frequency A/Q on the torus: 0 <= A < Q, gcd(A,Q) = 1,
// A = 0 only when Q = 1.
struct RationalFreq {
    std::int64_t num = 0;
    std::int64_t den = 1;

    RationalFreq() = default;
    RationalFreq(std::int64_t a, std::int64_t q);  // reduces and normalizes

    double value() const { return double(num) / double(den); }
    bool operator==(const RationalFreq& o) const {
        return num == o.num && den == o.den;
    }
    bool operator<(const RationalFreq& o) const {
        return num * o.den < o.num * den;
    }
};

// Euler phi for 1..n via linear sieve.
std::vector<std::int64_t> totient_table(std::int64_t n);

// Reduced fractions with denominator in the dyadic shell [2^{s-1}, 2^s).
// s = 1 gives {0/1}.
std::vector<RationalFreq> enumerate_shell(int s);

// All reduced fractions with 1 <= Q <= qmax (0/1 included).
std::vector<RationalFreq> enumerate_denominators_up_to(std::int64_t qmax);

// Complete normalized degree-d Weyl sum S(A/Q) = (1/Q) sum_{n<=Q} e(-(A/Q) n^d).
// Exact integer phase arithmetic; Q capped (default 10^7) against overflow
// and runaway runtime.
cplx complete_weyl_sum(int d, const RationalFreq& f,
                       std::int64_t q_cap = 10'000'000);

// Partial normalized sum (1/N) sum_{n<=N} e(-beta n^d) at a real frequency.
// Phases beta * n^d are reduced mod 1 in double-word arithmetic so the
// 53-bit mantissa never truncates the integer part.
cplx normalized_weyl_sum(int d, std::int64_t N, double beta);
// Rational version with exact integer phase reduction.
cplx normalized_weyl_sum(int d, std::int64_t N, const RationalFreq& beta);

// frac(beta * n^d) computed exactly from the binary expansion of beta.
// Exposed for tests.
double power_phase_frac(double beta, std::int64_t n, int d);

// Weighted variant sum_n w_n e(-beta n^d) over n in [n_lo, n_hi], same
// phase machinery; used for the smooth-kernel transforms.
cplx weighted_power_phase_sum(int d, std::int64_t n_lo, std::int64_t n_hi,
                              const std::vector<double>& weights, double beta);

struct HuaRow {
    std::int64_t q = 0;
    double max_norm_sum = 0;  // max_A |S(A/Q)|
    double scaled = 0;        // max_A |S(A/Q)| * Q^{1/d}
};

// Scan denominators up to q_max (optionally primes only) and report the
// Hua-normalized magnitudes.
std::vector<HuaRow> hua_scan(int d, std::int64_t q_max, bool primes_only);

// Major/minor arc decomposition at scale N: major arcs are centered at the
// reduced A/Q with Q <= N^c and have halfwidth 1/(Q N^{d-c}).
struct ArcDecomposition {
    std::int64_t N = 0;
    int d = 2;
    double c = 0.2;
    std::vector<RationalFreq> centers;   // sorted by value
    std::vector<double> halfwidths;      // aligned with centers

    bool is_major(double beta) const;    // torus distance to some center
};

ArcDecomposition make_arcs(int d, std::int64_t N, double c);

struct MinorArcScan {
    std::vector<std::int64_t> n_values;
    std::vector<double> sup_values;   // per N: max |normalized sum| over samples
    std::vector<double> reject_rate;  // fraction of samples rejected as major
    DecayFit fit;                     // log2 sup vs log2 N
};

// Rejection-sample minor-arc frequencies and record the observed sup of the
// normalized Weyl sum per N.  n_list must be strictly increasing.  Errors
// out if rejection exceeds 99% for some N.
MinorArcScan minor_arc_decay_scan(int d, const std::vector<std::int64_t>& n_list,
                                  double c, int samples_per_n,
                                  std::uint64_t seed);

// Append-only CSV cache of complete Weyl sums keyed by (d, A, Q).
class WeylCache {
public:
    WeylCache() = default;
    explicit WeylCache(std::string path);  // loads existing rows if present

    cplx get(int d, const RationalFreq& f);  // computes + records on miss
    std::size_t size() const { return map_.size(); }
    bool contains(int d, const RationalFreq& f) const;

private:
    struct Key {
        int d;
        std::int64_t a, q;
        bool operator<(const Key& o) const {
            if (d != o.d) return d < o.d;
            if (q != o.q) return q < o.q;
            return a < o.a;
        }
    };
    std::string path_;
    std::map<Key, cplx> map_;
};

bool is_prime(std::int64_t n);

}  // namespace weyl
