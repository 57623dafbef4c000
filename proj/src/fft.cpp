#include "weyl/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace weyl {

void GridSignal::trim(double tol) {
    std::size_t a = 0, b = values.size();
    while (a < b && std::abs(values[a]) <= tol) ++a;
    while (b > a && std::abs(values[b - 1]) <= tol) --b;
    if (a == b) {
        offset = 0;
        values.clear();
        return;
    }
    offset += std::int64_t(a);
    values = std::vector<cplx>(values.begin() + a, values.begin() + b);
}

double l2_norm(const GridSignal& f) {
    std::vector<double> sq(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) sq[i] = std::norm(f.values[i]);
    return std::sqrt(pairwise_sum(sq));
}

double l1_norm(const GridSignal& f) {
    std::vector<double> ab(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) ab[i] = std::abs(f.values[i]);
    return pairwise_sum(ab);
}

GridSignal add(const GridSignal& a, const GridSignal& b) {
    if (a.values.empty()) return b;
    if (b.values.empty()) return a;
    std::int64_t lo = std::min(a.lo(), b.lo());
    std::int64_t hi = std::max(a.hi(), b.hi());
    GridSignal out(lo, std::vector<cplx>(std::size_t(hi - lo)));
    for (std::int64_t x = a.lo(); x < a.hi(); ++x) out.ref(x) += a.at(x);
    for (std::int64_t x = b.lo(); x < b.hi(); ++x) out.ref(x) += b.at(x);
    return out;
}

GridSignal scale(const GridSignal& a, cplx c) {
    GridSignal out = a;
    for (auto& v : out.values) v *= c;
    return out;
}

double l2_norm(const CyclicSignal& f) {
    std::vector<double> sq(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) sq[i] = std::norm(f.values[i]);
    return std::sqrt(pairwise_sum(sq));
}

// In-place iterative radix-2 transform; sign = -1 forward, +1 inverse
// (inverse here does NOT divide by n).  Twiddles come from a per-level table
// while it stays small; the last few levels of very large transforms fall
// back to direct angle evaluation so memory stays at one buffer.
void fft_pow2_inplace(std::vector<cplx>& a, int sign) {
    std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_pow2_inplace: length must be a power of two");
    if (n <= 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    constexpr std::size_t table_cap = std::size_t(1) << 20;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = double(sign) * two_pi / double(len);
        std::size_t half = len >> 1;
        if (half <= table_cap) {
            std::vector<cplx> w(half);
            for (std::size_t i = 0; i < half; ++i)
                w[i] = {std::cos(ang * double(i)), std::sin(ang * double(i))};
            for (std::size_t i = 0; i < n; i += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    cplx u = a[i + j];
                    cplx v = a[i + j + half] * w[j];
                    a[i + j] = u + v;
                    a[i + j + half] = u - v;
                }
            }
        } else {
            for (std::size_t i = 0; i < n; i += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    cplx w{std::cos(ang * double(j)), std::sin(ang * double(j))};
                    cplx u = a[i + j];
                    cplx v = a[i + j + half] * w;
                    a[i + j] = u + v;
                    a[i + j + half] = u - v;
                }
            }
        }
    }
}

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Bluestein chirp transform for arbitrary modulus, built on the radix-2 core.
std::vector<cplx> fft_bluestein(const std::vector<cplx>& x, int sign) {
    std::size_t n = x.size();
    std::size_t m = 1;
    while (m < 2 * n + 1) m <<= 1;
    std::vector<cplx> a(m), b(m), chirp(n);
    for (std::size_t i = 0; i < n; ++i) {
        // angle = sign * pi * i^2 / n, with i^2 reduced mod 2n to keep the
        // argument small (i^2 mod 2n gives the same phase).
        std::uint64_t i2 = (std::uint64_t(i) * i) % (2 * n);
        double ang = double(sign) * std::numbers::pi * double(i2) / double(n);
        chirp[i] = {std::cos(ang), std::sin(ang)};
        a[i] = x[i] * chirp[i];
        b[i] = std::conj(chirp[i]);
        if (i != 0) b[m - i] = std::conj(chirp[i]);
    }
    fft_pow2_inplace(a, -1);
    fft_pow2_inplace(b, -1);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    fft_pow2_inplace(a, +1);
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * chirp[i] / double(m);
    return out;
}

std::vector<cplx> transform(const std::vector<cplx>& x, int sign) {
    if (x.size() <= 1) return x;
    if (is_pow2(x.size())) {
        std::vector<cplx> a = x;
        fft_pow2_inplace(a, sign);
        return a;
    }
    return fft_bluestein(x, sign);
}

}  // namespace

CyclicSignal dft(const CyclicSignal& f) {
    if (f.modulus() == 0) throw std::invalid_argument("dft: empty signal");
    return CyclicSignal(transform(f.values, -1));
}

CyclicSignal idft(const CyclicSignal& fhat) {
    if (fhat.modulus() == 0) throw std::invalid_argument("idft: empty signal");
    std::vector<cplx> v = transform(fhat.values, +1);
    double inv = 1.0 / double(v.size());
    for (auto& z : v) z *= inv;
    return CyclicSignal(std::move(v));
}

CyclicSignal embed_mod(const GridSignal& f, std::size_t M) {
    if (M == 0) throw std::invalid_argument("embed_mod: modulus must be positive");
    CyclicSignal out(M);
    for (std::int64_t x = f.lo(); x < f.hi(); ++x) {
        std::int64_t r = x % std::int64_t(M);
        if (r < 0) r += std::int64_t(M);
        out.values[std::size_t(r)] += f.at(x);
    }
    return out;
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace weyl
