#include "weyl/ap_test.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "weyl/kernels.hpp"
#include "weyl/weyl_sums.hpp"

namespace weyl {

GridSignal gen_ap_test(std::int64_t Q, std::int64_t N,
                       const SmoothCutoff& profile) {
    if (Q < 1) throw std::invalid_argument("gen_ap_test: Q must be >= 1");
    if (N < 1) throw std::invalid_argument("gen_ap_test: N must be >= 1");
    if (Q >= 2 && !is_prime(Q))
        throw std::invalid_argument("gen_ap_test: Q must be 1 or prime, got " +
                                    std::to_string(Q));
    if (Q * Q > N)
        throw std::invalid_argument(
            "gen_ap_test: violated standing assumption Q <= sqrt(N) "
            "(progression too sparse for the scaling regime)");

    // Support window of the weight t -> profile(t), in units of N.
    double t_lo, t_hi;
    switch (profile.kind) {
        case SmoothCutoff::Kind::phi:
            t_lo = 0.5;
            t_hi = 4.0;
            break;
        case SmoothCutoff::Kind::mu_weight:
            t_lo = 0.0;
            t_hi = 1.0;
            break;
        case SmoothCutoff::Kind::chi:
            // Schwartz tails; window where the kernel is numerically alive.
            t_lo = -8.0;
            t_hi = 8.0;
            break;
        default:
            throw std::invalid_argument("gen_ap_test: unknown profile kind");
    }

    std::int64_t m_lo = std::int64_t(std::ceil(t_lo * double(N) / double(Q)));
    std::int64_t m_hi = std::int64_t(std::floor(t_hi * double(N) / double(Q)));
    if (m_hi < m_lo)
        throw std::invalid_argument("gen_ap_test: profile window holds no atom");

    GridSignal f;
    f.offset = m_lo * Q;
    f.values.assign(std::size_t((m_hi - m_lo) * Q + 1), cplx{0, 0});
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
        double t = double(m) * double(Q) / double(N);
        double w = 0;
        switch (profile.kind) {
            case SmoothCutoff::Kind::phi:
                w = phi_profile(t);
                break;
            case SmoothCutoff::Kind::mu_weight:
                w = mu_weight_profile(t, profile.degree);
                break;
            case SmoothCutoff::Kind::chi:
                w = chi_time_profile(t);
                break;
            default:
                break;
        }
        if (w != 0.0) f.values[std::size_t((m - m_lo) * Q)] = w;
    }
    f.trim();
    return f;
}

ArithComplexityResult experiment_arithmetic_complexity(
    int d, int k, const std::vector<std::int64_t>& Q_list, std::int64_t N,
    double c) {
    if (d < 2) throw std::invalid_argument("experiment_arithmetic_complexity: d >= 2");
    if (k < 1) throw std::invalid_argument("experiment_arithmetic_complexity: k >= 1");
    if (N < 2) throw std::invalid_argument("experiment_arithmetic_complexity: N >= 2");
    if (Q_list.empty())
        throw std::invalid_argument("experiment_arithmetic_complexity: empty Q list");

    double delta = std::log2(double(N)) / double(k) - double(d - 1);
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument(
            "experiment_arithmetic_complexity: violated regime constraint "
            "N = 2^{k(d-1+delta)} with delta in (0,1]; got delta = " +
            std::to_string(delta));

    ArithComplexityResult out;
    out.d = d;
    out.k = k;
    out.N = N;
    out.c = c;
    out.delta = delta;

    SmoothCutoff phi = make_cutoff(SmoothCutoff::Kind::phi);
    PolynomialKernel K = build_kernel(d, k, true);
    for (std::int64_t Q : Q_list) {
        GridSignal f = gen_ap_test(Q, N, phi);
        GridSignal g = convolve(K, f);
        ArithComplexityRow row;
        row.Q = Q;
        double fn = l2_norm(f);
        row.measured = fn > 0 ? l2_norm(g) / fn : 0.0;
        row.predicted = std::pow(double(Q), -1.0 / double(d)) *
                        std::sqrt(double(N) * std::exp2(-double(d) * double(k)));
        row.ratio = row.measured / row.predicted;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace weyl
