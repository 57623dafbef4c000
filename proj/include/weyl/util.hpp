#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace weyl {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// e(t) = exp(2*pi*i*t).  The argument is reduced mod 1 to [-1/2, 1/2)
// before scaling by 2*pi so large phases keep full precision.
inline cplx unit_phase(double t) {
    double r = t - std::nearbyint(t);
    return {std::cos(two_pi * r), std::sin(two_pi * r)};
}

// Fractional part in [0, 1).
inline double frac(double x) {
    double f = x - std::floor(x);
    return f < 1.0 ? f : 0.0;
}

// Circular distance of t to the nearest integer.
inline double dist_to_z(double t) { return std::abs(t - std::nearbyint(t)); }

// Error-free transforms used by the phase-reduction and compensated sums.
struct two_sum_t {
    double hi, lo;
};

inline two_sum_t two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline two_sum_t two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

// Neumaier-compensated accumulator for complex sums.  The compensation is
// kept in a separate channel (never re-injected into a large addition), so
// cancellation between terms that dwarf the true sum is survived exactly.
class kahan_sum {
public:
    void add(cplx z) {
        add_part(re_, ce_, z.real());
        add_part(im_, ci_, z.imag());
    }
    cplx value() const { return {re_ + ce_, im_ + ci_}; }

private:
    static void add_part(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double re_ = 0, im_ = 0, ce_ = 0, ci_ = 0;
};

// Pairwise tree reduction: deterministic and numerically benign regardless of
// traversal order used by callers that build the vector.
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v, 0, v.size());
}

inline std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

// Format helpers: the artifact writers need byte-stable float formatting.
std::string fmt_double(double x);

}  // namespace weyl
