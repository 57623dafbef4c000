#include "weyl/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "weyl/cutoff.hpp"
#include "weyl/paths.hpp"
#include "weyl/rng.hpp"

namespace weyl {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

GridSignal dyadic_expectation(const GridSignal& f, int k) {
    if (k < 0) throw std::invalid_argument("dyadic_expectation: need k >= 0");
    if (k >= 62) throw std::invalid_argument("dyadic_expectation: scale overflow");
    if (f.values.empty()) return f;
    std::int64_t block = std::int64_t(1) << k;
    GridSignal out = f;
    std::int64_t x = f.lo();
    while (x < f.hi()) {
        std::int64_t seg_hi = std::min((floor_div(x, block) + 1) * block, f.hi());
        cplx sum = 0;
        for (std::int64_t y = x; y < seg_hi; ++y) sum += f.at(y);
        cplx mean = sum / double(seg_hi - x);
        for (std::int64_t y = x; y < seg_hi; ++y) out.ref(y) = mean;
        x = seg_hi;
    }
    return out;
}

CyclicSignal dyadic_expectation(const CyclicSignal& f, int k) {
    if (k < 0) throw std::invalid_argument("dyadic_expectation: need k >= 0");
    std::size_t M = f.modulus();
    if (M == 0) throw std::invalid_argument("dyadic_expectation: empty signal");
    if (k >= 62 || (std::size_t(1) << k) > M || M % (std::size_t(1) << k) != 0)
        throw std::invalid_argument(
            "dyadic_expectation: 2^k must divide the modulus");
    std::size_t block = std::size_t(1) << k;
    CyclicSignal out(M);
    for (std::size_t b = 0; b < M; b += block) {
        cplx sum = 0;
        for (std::size_t y = b; y < b + block; ++y) sum += f.values[y];
        cplx mean = sum / double(block);
        for (std::size_t y = b; y < b + block; ++y) out.values[y] = mean;
    }
    return out;
}

namespace {

// DFT of the wrapped discrete kernel 2^{-k} chi(2^{-k} n), |n| <= tail * 2^k.
CyclicSignal chi_scale_multiplier(std::size_t M, int k, double tail_radius) {
    if (k < 0) throw std::invalid_argument("smooth scale: need k >= 0");
    if (k >= 40) throw std::invalid_argument("smooth scale: k too large");
    std::int64_t reach = std::int64_t(std::ceil(tail_radius * std::exp2(double(k))));
    CyclicSignal ker(M);
    double inv = std::exp2(double(-k));
    ker.values[0] += inv * chi_time_profile(0.0);
    for (std::int64_t n = 1; n <= reach; ++n) {
        double w = inv * chi_time_profile(inv * double(n));  // chi is even
        ker.values[std::size_t(n) % M] += w;
        ker.values[std::size_t((M - std::size_t(n) % M) % M)] += w;
    }
    return dft(ker);
}

}  // namespace

CyclicSignal smooth_scale_cyclic(const CyclicSignal& f, int k, double tail_radius) {
    std::size_t M = f.modulus();
    if (M == 0) throw std::invalid_argument("smooth_scale_cyclic: empty signal");
    CyclicSignal mult = chi_scale_multiplier(M, k, tail_radius);
    CyclicSignal fhat = dft(f);
    CyclicSignal prod(M);
    for (std::size_t j = 0; j < M; ++j)
        prod.values[j] = mult.values[j] * fhat.values[j];
    return idft(prod);
}

namespace {

int floor_log2(std::size_t n) {
    int k = 0;
    while ((std::size_t(1) << (k + 1)) <= n) ++k;
    return k;
}

double pointwise_variation_l2(const std::vector<std::vector<double>>& family,
                              std::size_t len, double r) {
    std::vector<double> scales(family.size());
    double acc = 0;
    for (std::size_t x = 0; x < len; ++x) {
        for (std::size_t k = 0; k < family.size(); ++k) scales[k] = family[k][x];
        double vr = r_variation(make_scalar_path(scales), r);
        acc += vr * vr;
    }
    return std::sqrt(acc);
}

}  // namespace

LepingleResult lepingle_check(ScaleFamilyKind kind, int trials,
                              std::size_t path_length, double r,
                              std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("lepingle_check: need trials >= 1");
    if (path_length < 2)
        throw std::invalid_argument("lepingle_check: need path_length >= 2");
    if (!(r > 2)) throw std::invalid_argument("lepingle_check: need r > 2");

    std::size_t M = path_length;
    int k_max = floor_log2(M);

    // Convolution multipliers do not depend on the trial; build once.
    std::vector<CyclicSignal> mults;
    if (kind == ScaleFamilyKind::convolution)
        for (int k = 0; k <= k_max; ++k)
            mults.push_back(chi_scale_multiplier(M, k, 40.0));

    LepingleResult out;
    double norm_factor = r / (r - 2.0);
    for (int t = 0; t < trials; ++t) {
        splitmix64 rng(derive_seed(seed, std::uint64_t(t)));
        std::vector<double> f(M);
        double f2 = 0;
        for (std::size_t i = 0; i < M; ++i) {
            f[i] = rng.normal();
            f2 += f[i] * f[i];
        }
        double fnorm = std::sqrt(f2);

        std::vector<std::vector<double>> family;
        if (kind == ScaleFamilyKind::martingale) {
            GridSignal g;
            g.offset = 0;
            g.values.assign(f.begin(), f.end());
            for (int k = 0; k <= k_max; ++k) {
                GridSignal ek = dyadic_expectation(g, k);
                std::vector<double> row(M);
                for (std::size_t i = 0; i < M; ++i) row[i] = ek.values[i].real();
                family.push_back(std::move(row));
            }
        } else {
            CyclicSignal g(M);
            for (std::size_t i = 0; i < M; ++i) g.values[i] = f[i];
            CyclicSignal fhat = dft(g);
            for (int k = 0; k <= k_max; ++k) {
                CyclicSignal prod(M);
                for (std::size_t j = 0; j < M; ++j)
                    prod.values[j] = mults[std::size_t(k)].values[j] * fhat.values[j];
                CyclicSignal conv = idft(prod);
                std::vector<double> row(M);
                for (std::size_t i = 0; i < M; ++i) row[i] = conv.values[i].real();
                family.push_back(std::move(row));
            }
        }

        double ratio = 0;
        if (fnorm > 0)
            ratio = pointwise_variation_l2(family, M, r) / (norm_factor * fnorm);
        out.trial_ratios.push_back(ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
    }
    return out;
}

std::vector<RademacherMenshovRow> rademacher_menshov_scan(
    const std::vector<std::size_t>& family_sizes, int trials, std::size_t len,
    std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("rademacher_menshov_scan: trials");
    if (len < 2) throw std::invalid_argument("rademacher_menshov_scan: len");
    if (family_sizes.empty())
        throw std::invalid_argument("rademacher_menshov_scan: no family sizes");
    for (std::size_t i = 0; i < family_sizes.size(); ++i) {
        if (family_sizes[i] < 2 || family_sizes[i] > len)
            throw std::invalid_argument(
                "rademacher_menshov_scan: family sizes must lie in [2, len]");
        if (i > 0 && family_sizes[i] <= family_sizes[i - 1])
            throw std::invalid_argument(
                "rademacher_menshov_scan: family sizes must increase");
    }

    std::vector<RademacherMenshovRow> rows(family_sizes.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].family_size = family_sizes[i];

    for (int t = 0; t < trials; ++t) {
        splitmix64 rng(derive_seed(seed, std::uint64_t(t)));
        std::vector<double> f(len);
        for (auto& x : f) x = rng.normal();

        // Level 0: one block, F_0 the global mean.
        struct Block {
            std::size_t lo, size;
            double mean;
        };
        double total = 0;
        for (double x : f) total += x;
        double mean0 = total / double(len);
        std::vector<Block> blocks{{0, len, mean0}};
        std::vector<double> F(len, mean0);
        std::vector<double> maxdev(len, 0.0);
        double a2 = 0;

        std::size_t next_row = 0;
        for (std::size_t split = 1; split < family_sizes.back(); ++split) {
            // Split the largest block (leftmost on ties) at its midpoint.
            std::size_t pick = 0;
            for (std::size_t b = 1; b < blocks.size(); ++b)
                if (blocks[b].size > blocks[pick].size ||
                    (blocks[b].size == blocks[pick].size &&
                     blocks[b].lo < blocks[pick].lo))
                    pick = b;
            Block old = blocks[pick];
            std::size_t left_n = old.size / 2;
            if (left_n == 0 || left_n == old.size)
                throw std::runtime_error("rademacher_menshov_scan: unsplittable block");
            double lsum = 0;
            for (std::size_t x = old.lo; x < old.lo + left_n; ++x) lsum += f[x];
            double lmean = lsum / double(left_n);
            double rmean = (old.mean * double(old.size) - lsum) /
                           double(old.size - left_n);
            blocks[pick] = {old.lo, left_n, lmean};
            blocks.push_back({old.lo + left_n, old.size - left_n, rmean});
            for (std::size_t x = old.lo; x < old.lo + old.size; ++x) {
                double v = x < old.lo + left_n ? lmean : rmean;
                double d = v - F[x];
                a2 += d * d;
                F[x] = v;
                maxdev[x] = std::max(maxdev[x], std::abs(F[x] - mean0));
            }

            std::size_t size_now = split + 1;
            while (next_row < family_sizes.size() &&
                   family_sizes[next_row] == size_now) {
                double dev2 = 0;
                for (double v : maxdev) dev2 += v * v;
                double ratio = a2 > 0 ? std::sqrt(dev2 / a2) : 0.0;
                rows[next_row].max_ratio = std::max(rows[next_row].max_ratio, ratio);
                ++next_row;
            }
        }
    }

    for (auto& row : rows) {
        double lg = std::log2(double(row.family_size));
        row.normalized = row.max_ratio / (1.0 + lg * lg);
    }
    return rows;
}

double sobolev_embedding_check(const RectField& F, std::size_t t_anchor) {
    std::size_t nt = F.t.size();
    if (F.nx < 1 || nt < 5)
        throw std::invalid_argument("sobolev_embedding_check: need nx >= 1, nt >= 5");
    if (F.values.size() != F.nx * nt)
        throw std::invalid_argument("sobolev_embedding_check: value count mismatch");
    if (t_anchor >= nt)
        throw std::invalid_argument("sobolev_embedding_check: anchor out of range");
    double dt = F.t[1] - F.t[0];
    if (!(dt > 0))
        throw std::invalid_argument("sobolev_embedding_check: t must increase");
    for (std::size_t i = 1; i < nt; ++i)
        if (std::abs((F.t[i] - F.t[i - 1]) - dt) > 1e-9 * dt)
            throw std::invalid_argument("sobolev_embedding_check: t must be uniform");

    // Derivative stability: centered differences at full resolution must
    // agree with the stride-2 grid within 1% RMS, else the grid is too
    // coarse to trust.
    auto centered = [&](const double* row, std::size_t n, double step,
                        std::vector<double>& g) {
        g.resize(n);
        g[0] = (row[1] - row[0]) / step;
        g[n - 1] = (row[n - 1] - row[n - 2]) / step;
        for (std::size_t i = 1; i + 1 < n; ++i)
            g[i] = (row[i + 1] - row[i - 1]) / (2 * step);
    };
    {
        double diff2 = 0, fine2 = 0;
        std::vector<double> g, gc, coarse_row;
        for (std::size_t ix = 0; ix < F.nx; ++ix) {
            const double* row = F.values.data() + ix * nt;
            centered(row, nt, dt, g);
            coarse_row.clear();
            for (std::size_t i = 0; i < nt; i += 2) coarse_row.push_back(row[i]);
            centered(coarse_row.data(), coarse_row.size(), 2 * dt, gc);
            for (std::size_t ic = 1; ic + 1 < coarse_row.size(); ++ic) {
                double d = gc[ic] - g[2 * ic];
                diff2 += d * d;
                fine2 += g[2 * ic] * g[2 * ic];
            }
        }
        if (diff2 > 1e-4 * std::max(fine2, 1e-300) && fine2 > 1e-300)
            throw std::invalid_argument(
                "sobolev_embedding_check: t-grid too coarse for a stable derivative");
    }

    auto trapezoid = [&](const std::vector<double>& sq) {
        double s = 0.5 * (sq.front() + sq.back());
        for (std::size_t i = 1; i + 1 < sq.size(); ++i) s += sq[i];
        return s * dt;
    };

    double worst = -std::numeric_limits<double>::infinity();
    std::vector<double> g, sq(nt);
    for (std::size_t ix = 0; ix < F.nx; ++ix) {
        const double* row = F.values.data() + ix * nt;
        double lhs = 0;
        for (std::size_t i = 0; i < nt; ++i) lhs = std::max(lhs, std::abs(row[i]));
        centered(row, nt, dt, g);
        for (std::size_t i = 0; i < nt; ++i) sq[i] = row[i] * row[i];
        double i_f = trapezoid(sq);
        for (std::size_t i = 0; i < nt; ++i) sq[i] = g[i] * g[i];
        double i_g = trapezoid(sq);
        double rhs = 2 * std::abs(row[t_anchor]) +
                     2 * std::pow(i_f, 0.25) * std::pow(i_g, 0.25);
        worst = std::max(worst, lhs - rhs);
    }
    return worst;
}

}  // namespace weyl
