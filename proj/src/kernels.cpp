#include "weyl/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "weyl/cutoff.hpp"
#include "weyl/quadrature.hpp"

namespace weyl {

double PolynomialKernel::mass() const {
    std::vector<double> w = weights;
    return pairwise_sum(w);
}

PolynomialKernel build_kernel(int d, int k, bool smooth) {
    if (d < 2) throw std::invalid_argument("build_kernel: degree must be >= 2");
    if (k < 0) throw std::invalid_argument("build_kernel: scale must be >= 0");
    if (std::int64_t(d) * (k + 2) >= 62)
        throw std::invalid_argument("build_kernel: 2^{d(k+2)} overflows the atom range");
    PolynomialKernel K;
    K.d = d;
    K.k = k;
    K.smooth = smooth;
    if (!smooth) {
        std::int64_t count = std::int64_t(1) << k;
        K.n_lo = 1;
        K.weights.assign(std::size_t(count), std::ldexp(1.0, -k));
        K.atoms.resize(std::size_t(count));
        for (std::int64_t n = 1; n <= count; ++n)
            K.atoms[std::size_t(n - 1)] = ipow(n, d);
        return K;
    }
    // smooth top half: weights phi_k(n) = 2^{-k} phi(2^{-k} n), nonzero only
    // for n in (2^{k-1}, 2^{k+2})
    std::int64_t lo = (std::int64_t(1) << k) / 2;
    if (lo < 1) lo = 1;
    std::int64_t hi = std::int64_t(1) << (k + 2);
    double scale = std::ldexp(1.0, -k);
    std::vector<double> w;
    std::int64_t first = -1;
    for (std::int64_t n = lo; n <= hi; ++n) {
        double v = scale * phi_profile(scale * double(n));
        if (v != 0.0 && first < 0) first = n;
        if (first >= 0) w.push_back(v);
    }
    while (!w.empty() && w.back() == 0.0) w.pop_back();
    if (w.empty()) throw std::runtime_error("build_kernel: empty smooth kernel");
    K.n_lo = first;
    K.weights = std::move(w);
    K.atoms.resize(K.weights.size());
    for (std::size_t i = 0; i < K.weights.size(); ++i)
        K.atoms[i] = ipow(K.n_lo + std::int64_t(i), d);
    return K;
}

GridSignal convolve(const PolynomialKernel& K, const GridSignal& f,
                    std::size_t budget_bytes, std::size_t direct_product_cap) {
    if (f.values.empty()) return {};
    std::int64_t out_lo = f.lo() + K.atoms.front();
    std::int64_t out_hi = f.hi() + K.atoms.back();  // exclusive bound + atoms
    std::size_t out_len = std::size_t(out_hi - out_lo);
    if (out_len * sizeof(cplx) > budget_bytes)
        throw BudgetError("convolve: output of " + std::to_string(out_len) +
                          " samples exceeds budget-bytes");
    std::size_t products = K.atoms.size() * f.values.size();
    if (products <= direct_product_cap) {
        GridSignal out(out_lo, std::vector<cplx>(out_len));
        for (std::size_t i = 0; i < K.atoms.size(); ++i) {
            double w = K.weights[i];
            if (w == 0.0) continue;
            std::size_t base = std::size_t(K.atoms[i] - K.atoms.front());
            for (std::size_t j = 0; j < f.values.size(); ++j)
                out.values[base + j] += w * f.values[j];
        }
        return out;
    }
    // FFT path on a cyclic embedding large enough that nothing wraps.
    std::size_t M = 1;
    while (M < out_len + 1) M <<= 1;
    if (2 * M * sizeof(cplx) > budget_bytes)
        throw BudgetError("convolve: FFT workspace exceeds budget-bytes");
    CyclicSignal a(M), b(M);
    for (std::size_t i = 0; i < K.atoms.size(); ++i)
        a.values[std::size_t(K.atoms[i] - K.atoms.front())] += K.weights[i];
    for (std::size_t j = 0; j < f.values.size(); ++j) b.values[j] = f.values[j];
    CyclicSignal fa = dft(a), fb = dft(b);
    for (std::size_t i = 0; i < M; ++i) fa.values[i] *= fb.values[i];
    CyclicSignal prod = idft(fa);
    GridSignal out(out_lo, std::vector<cplx>(out_len));
    for (std::size_t i = 0; i < out_len; ++i) out.values[i] = prod.values[i];
    return out;
}

GridSignal maximal_operator(int d, int k_max, const GridSignal& f, bool smooth,
                            bool full_n, std::size_t budget_bytes) {
    if (k_max < 0) throw std::invalid_argument("maximal_operator: k_max >= 0");
    if (f.values.empty()) return {};
    if (!full_n) {
        GridSignal out;
        for (int k = 0; k <= k_max; ++k) {
            PolynomialKernel K = build_kernel(d, k, smooth);
            GridSignal g = convolve(K, f, budget_bytes);
            if (out.values.empty()) {
                out = GridSignal(g.lo(), std::vector<cplx>(g.values.size()));
            } else if (g.lo() < out.lo() || g.hi() > out.hi()) {
                GridSignal wider(std::min(out.lo(), g.lo()),
                                 std::vector<cplx>(std::size_t(
                                     std::max(out.hi(), g.hi()) -
                                     std::min(out.lo(), g.lo()))));
                for (std::int64_t x = out.lo(); x < out.hi(); ++x)
                    wider.ref(x) = out.at(x);
                out = std::move(wider);
            }
            for (std::int64_t x = g.lo(); x < g.hi(); ++x)
                out.ref(x) = std::max(out.at(x).real(), std::abs(g.at(x)));
        }
        return out;
    }
    // full-N family: every window length N <= 2^{k_max} (small inputs only)
    std::int64_t n_max = std::int64_t(1) << k_max;
    std::int64_t atom_max = ipow(n_max, d);
    std::int64_t out_lo = f.lo() + 1;
    std::int64_t out_hi = f.hi() + atom_max;
    std::size_t out_len = std::size_t(out_hi - out_lo);
    if (out_len * sizeof(cplx) > budget_bytes)
        throw BudgetError("maximal_operator: full-N output exceeds budget-bytes");
    GridSignal out(out_lo, std::vector<cplx>(out_len));
    std::vector<cplx> acc(out_len);  // running sum_{n<=N} f(x - n^d)
    for (std::int64_t n = 1; n <= n_max; ++n) {
        std::int64_t a = ipow(n, d);
        for (std::int64_t x = std::max(out_lo, f.lo() + a);
             x < std::min(out_hi, f.hi() + a); ++x)
            acc[std::size_t(x - out_lo)] += f.at(x - a);
        double inv = 1.0 / double(n);
        for (std::size_t i = 0; i < out_len; ++i) {
            double v = std::abs(acc[i]) * inv;
            if (v > out.values[i].real()) out.values[i] = v;
        }
    }
    return out;
}

GridSignal hl_maximal(const GridSignal& f, std::int64_t out_lo, std::int64_t out_hi) {
    if (out_hi < out_lo) throw std::invalid_argument("hl_maximal: empty output window");
    // prefix sums of |f| over its support
    std::size_t n = f.values.size();
    std::vector<double> pre(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] + std::abs(f.values[i]);
    auto window_sum = [&](std::int64_t a, std::int64_t b) {  // inclusive positions
        std::int64_t ia = std::max(a, f.lo()) - f.lo();
        std::int64_t ib = std::min(b, f.hi() - 1) - f.lo();
        if (ib < ia) return 0.0;
        return pre[std::size_t(ib + 1)] - pre[std::size_t(ia)];
    };
    GridSignal out(out_lo, std::vector<cplx>(std::size_t(out_hi - out_lo + 1)));
    for (std::int64_t x = out_lo; x <= out_hi; ++x) {
        // growing the window past the farthest support edge cannot help
        std::int64_t reach = std::max(std::llabs(x - f.lo()), std::llabs(f.hi() - 1 - x));
        double best = 0;
        for (std::int64_t N = 0; N <= reach; ++N) {
            double avg = window_sum(x - N, x + N) / double(2 * N + 1);
            best = std::max(best, avg);
        }
        out.ref(x) = best;
    }
    return out;
}

cplx evaluate_vk(int d, int k, double xi, int panel_budget) {
    if (k < 0) throw std::invalid_argument("evaluate_vk: scale must be >= 0");
    double lambda = std::ldexp(xi, d * k);
    return vk_scaled(lambda, d, panel_budget);
}

double continuous_square_bound_check(int d, int k_min, int k_max,
                                     const std::vector<double>& xi_samples) {
    if (k_min > k_max) throw std::invalid_argument("continuous_square_bound_check: bad k range");
    if (xi_samples.empty())
        throw std::invalid_argument("continuous_square_bound_check: no samples");
    double mass = phi_mass();
    double worst = 0;
    for (double xi : xi_samples) {
        double total = 0;
        for (int k = k_min; k <= k_max; ++k) {
            cplx v = evaluate_vk(d, k, xi);
            // transform of the mass-normalized bump at the same dilation
            cplx ph = profile_ft([](double t) { return phi_profile(t); }, 0.5, 4.0,
                                 std::ldexp(xi, d * k)) /
                      mass;
            total += std::norm(v - ph);
        }
        worst = std::max(worst, total);
    }
    return worst;
}

}  // namespace weyl
