#pragma once

#include <cstdint>
#include <vector>

#include "weyl/util.hpp"

namespace weyl {

// Finitely supported complex function on Z.  values[i] sits at absolute
// position offset + i.  Positions outside the window read as zero.
struct GridSignal {
    std::int64_t offset = 0;
    std::vector<cplx> values;

    GridSignal() = default;
    GridSignal(std::int64_t off, std::vector<cplx> v) : offset(off), values(std::move(v)) {}

    std::int64_t lo() const { return offset; }
    std::int64_t hi() const { return offset + std::int64_t(values.size()); }  // exclusive

    cplx at(std::int64_t x) const {
        if (x < lo() || x >= hi()) return {};
        return values[std::size_t(x - offset)];
    }
    cplx& ref(std::int64_t x) { return values[std::size_t(x - offset)]; }

    // Drop zero margins; keeps at least one sample for nonempty input.
    void trim(double tol = 0.0);
};

double l2_norm(const GridSignal& f);
double l1_norm(const GridSignal& f);
GridSignal add(const GridSignal& a, const GridSignal& b);
GridSignal scale(const GridSignal& a, cplx c);

// Function on Z_M.  modulus() == values.size() == M >= 1.
struct CyclicSignal {
    std::vector<cplx> values;

    CyclicSignal() = default;
    explicit CyclicSignal(std::size_t m) : values(m) {}
    explicit CyclicSignal(std::vector<cplx> v) : values(std::move(v)) {}

    std::size_t modulus() const { return values.size(); }
    cplx at(std::int64_t x) const {
        std::int64_t m = std::int64_t(values.size());
        std::int64_t r = x % m;
        if (r < 0) r += m;
        return values[std::size_t(r)];
    }
};

double l2_norm(const CyclicSignal& f);

// Forward transform: fhat(j) = sum_n f(n) e(-j n / M), no normalization.
// Inverse carries the 1/M.  This matches the discrete-side convention used
// throughout: multipliers act on the forward side, Parseval reads
// sum|f|^2 = (1/M) sum|fhat|^2.
CyclicSignal dft(const CyclicSignal& f);
CyclicSignal idft(const CyclicSignal& fhat);

// In-place radix-2 transform on a power-of-two-length buffer.
// sign = -1 forward, +1 inverse; the inverse does NOT divide by n.
// Exposed for transforms too large to afford a second working copy.
void fft_pow2_inplace(std::vector<cplx>& a, int sign);

// Embed a finitely supported signal into Z_M by reducing positions mod M
// (periodization).  The DFT of the embedding samples the Z-side transform
// at frequencies j/M exactly.
CyclicSignal embed_mod(const GridSignal& f, std::size_t M);

}  // namespace weyl
