#include "weyl/multifreq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "weyl/cutoff.hpp"
#include "weyl/kernels.hpp"
#include "weyl/rng.hpp"
#include "weyl/util.hpp"

namespace weyl {

void FrequencySet::validate() const {
    if (modulus < 2) throw std::invalid_argument("frequency set: modulus < 2");
    if (unit < 1) throw std::invalid_argument("frequency set: unit < 1");
    if (thetas.empty()) throw std::invalid_argument("frequency set: empty");
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (thetas[i] < 0 || thetas[i] >= std::int64_t(modulus))
            throw std::invalid_argument("frequency set: theta outside [0, M)");
        if (i > 0 && thetas[i] <= thetas[i - 1])
            throw std::invalid_argument("frequency set: thetas must strictly increase");
    }
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        std::int64_t next = i + 1 < thetas.size()
                                ? thetas[i + 1] - thetas[i]
                                : thetas.front() + std::int64_t(modulus) - thetas[i];
        if (thetas.size() > 1 && next <= unit)
            throw std::invalid_argument(
                "frequency set: separation must exceed one unit");
    }
}

FrequencySet random_frequency_set(std::size_t count, std::size_t M,
                                  std::int64_t unit, std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("random_frequency_set: count 0");
    if (std::int64_t(count) * (unit + 1) > std::int64_t(M))
        throw std::invalid_argument(
            "random_frequency_set: M too small for the requested separation");
    FrequencySet out;
    out.unit = unit;
    out.modulus = M;
    splitmix64 rng(seed);
    std::size_t attempts = 0;
    while (out.thetas.size() < count) {
        if (++attempts > 1'000'000)
            throw std::runtime_error(
                "random_frequency_set: rejection sampling stalled (set too dense)");
        std::int64_t cand = std::int64_t(rng.below(M));
        bool ok = true;
        for (std::int64_t t : out.thetas) {
            std::int64_t gap = std::abs(circ_dist(cand - t, M));
            if (gap <= unit) {
                ok = false;
                break;
            }
        }
        if (ok) out.thetas.push_back(cand);
    }
    std::sort(out.thetas.begin(), out.thetas.end());
    out.validate();
    return out;
}

std::int64_t circ_dist(std::int64_t j, std::size_t M) {
    std::int64_t m = std::int64_t(M);
    std::int64_t r = j % m;
    if (r < 0) r += m;
    if (r >= m - m / 2) r -= m;  // into [-M/2, M/2)
    return r;
}

double band_profile(int k, std::int64_t dist_cells, std::int64_t unit) {
    return chi_hat_profile(std::exp2(double(k)) * double(dist_cells) /
                           double(unit));
}

int default_k_floor() { return 3; }

int truncation_k_floor(std::size_t n_freqs) {
    if (n_freqs == 0) throw std::invalid_argument("truncation_k_floor: N = 0");
    double lg = std::log2(double(n_freqs));
    double need = 4.0 * lg * lg;
    int k = default_k_floor();
    while (std::exp2(double(k)) < need) ++k;
    return k;
}

int top_scale(const FrequencySet& th) {
    int k = 0;
    while ((std::int64_t(1) << (k + 1)) <= th.unit) ++k;
    return k;
}

std::vector<int> parity_scales(int k_lo, int k_hi) {
    std::vector<int> out;
    for (int k = k_lo; k <= k_hi; ++k)
        if (k % 2 == 0) out.push_back(k);
    return out;
}

namespace {

void check_scale(const FrequencySet& th, int k) {
    if (k < default_k_floor())
        throw std::invalid_argument("scale k=" + std::to_string(k) +
                                    " is below the scale floor " +
                                    std::to_string(default_k_floor()));
    if (k > 40) throw std::invalid_argument("scale k too large");
    (void)th;
}

// Half-width in grid cells of the band at scale k (inclusive bound on
// nonzero band_profile).
std::int64_t band_reach(const FrequencySet& th, int k) {
    double w = double(th.unit) * std::exp2(double(-k - 1));
    return std::int64_t(std::floor(w)) + 1;
}

}  // namespace

MultiFreqState make_state(FrequencySet thetas, CyclicSignal f,
                          bool with_bandpieces) {
    thetas.validate();
    if (f.modulus() != thetas.modulus)
        throw std::invalid_argument("make_state: signal and frequency moduli differ");
    MultiFreqState st;
    st.thetas = std::move(thetas);
    st.fhat = dft(f);
    st.f = std::move(f);
    if (with_bandpieces) {
        std::size_t M = st.f.modulus();
        for (std::int64_t theta : st.thetas.thetas) {
            // (Mod_{-theta} f)^(j) = fhat(j + theta); base band profile at k=0.
            CyclicSignal ghat(M);
            for (std::size_t j = 0; j < M; ++j) {
                double prof = band_profile(0, circ_dist(std::int64_t(j), M),
                                           st.thetas.unit);
                if (prof != 0.0)
                    ghat.values[j] =
                        prof * st.fhat.at(std::int64_t(j) + theta);
            }
            st.bandpieces.push_back(idft(ghat));
            st.bandpiece_hats.push_back(std::move(ghat));
        }
    }
    return st;
}

double xi_multiplier(const FrequencySet& th, int k, std::int64_t j) {
    double sum = 0;
    for (std::int64_t theta : th.thetas)
        sum += band_profile(k, circ_dist(j - theta, th.modulus), th.unit);
    return sum;
}

double xi_multiplier_sup(const FrequencySet& th, int k) {
    check_scale(th, k);
    std::int64_t reach = band_reach(th, k);
    double sup = 0;
    for (std::int64_t theta : th.thetas)
        for (std::int64_t j = theta - reach; j <= theta + reach; ++j)
            sup = std::max(sup, xi_multiplier(th, k, j));
    return sup;
}

CyclicSignal xi_apply_frequency(const MultiFreqState& st, int k) {
    check_scale(st.thetas, k);
    std::size_t M = st.f.modulus();
    CyclicSignal prod(M);
    std::int64_t reach = band_reach(st.thetas, k);
    for (std::int64_t theta : st.thetas.thetas)
        for (std::int64_t j = theta - reach; j <= theta + reach; ++j) {
            double prof = band_profile(k, circ_dist(j - theta, M), st.thetas.unit);
            if (prof == 0.0) continue;
            std::size_t jj = std::size_t(((j % std::int64_t(M)) + std::int64_t(M)) %
                                         std::int64_t(M));
            prod.values[jj] += prof * st.fhat.values[jj];
        }
    return idft(prod);
}

CyclicSignal xi_apply_physical(const MultiFreqState& st, int k) {
    check_scale(st.thetas, k);
    if (st.bandpieces.empty())
        throw std::invalid_argument("xi_apply_physical: state lacks band pieces");
    std::size_t M = st.f.modulus();
    CyclicSignal out(M);
    for (std::size_t n = 0; n < st.thetas.thetas.size(); ++n) {
        // chi_k * f_theta via its transform, then modulate back up.
        CyclicSignal prod(M);
        for (std::size_t j = 0; j < M; ++j) {
            double prof = band_profile(k, circ_dist(std::int64_t(j), M),
                                       st.thetas.unit);
            if (prof != 0.0)
                prod.values[j] = prof * st.bandpiece_hats[n].values[j];
        }
        CyclicSignal conv = idft(prod);
        double theta = double(st.thetas.thetas[n]);
        for (std::size_t x = 0; x < M; ++x)
            out.values[x] +=
                unit_phase(theta * double(x) / double(M)) * conv.values[x];
    }
    return out;
}

double band_overlap_sup(const FrequencySet& th) {
    double sup = 0;
    for (std::int64_t theta : th.thetas) {
        std::int64_t reach = band_reach(th, 0);
        for (std::int64_t j = theta - reach; j <= theta + reach; ++j) {
            double s = 0;
            for (std::int64_t t2 : th.thetas) {
                double p = band_profile(0, circ_dist(j - t2, th.modulus), th.unit);
                s += p * p;
            }
            sup = std::max(sup, s);
        }
    }
    return sup;
}

CyclicSignal vector_maximal_F(const MultiFreqState& st, int k_floor) {
    if (st.bandpieces.empty())
        throw std::invalid_argument("vector_maximal_F: state lacks band pieces");
    std::size_t M = st.f.modulus();
    int k_top = top_scale(st.thetas);
    if (k_floor > k_top)
        throw std::invalid_argument("vector_maximal_F: empty scale range");
    std::vector<double> acc(M, 0.0);
    for (std::size_t n = 0; n < st.thetas.thetas.size(); ++n) {
        std::vector<double> best(M, 0.0);
        for (int k = k_floor; k <= k_top; ++k) {
            CyclicSignal prod(M);
            for (std::size_t j = 0; j < M; ++j) {
                double prof = band_profile(k, circ_dist(std::int64_t(j), M),
                                           st.thetas.unit);
                if (prof != 0.0)
                    prod.values[j] = prof * st.bandpiece_hats[n].values[j];
            }
            CyclicSignal conv = idft(prod);
            for (std::size_t x = 0; x < M; ++x)
                best[x] = std::max(best[x], std::abs(conv.values[x]));
        }
        for (std::size_t x = 0; x < M; ++x) acc[x] += best[x] * best[x];
    }
    CyclicSignal out(M);
    for (std::size_t x = 0; x < M; ++x) out.values[x] = std::sqrt(acc[x]);
    return out;
}

CyclicSignal multifreq_maximal(const MultiFreqState& st,
                               const std::vector<int>& scales) {
    if (scales.empty())
        throw std::invalid_argument("multifreq_maximal: empty scale list");
    std::size_t M = st.f.modulus();
    CyclicSignal out(M);
    for (int k : scales) {
        CyclicSignal xi = xi_apply_frequency(st, k);
        for (std::size_t x = 0; x < M; ++x)
            out.values[x] =
                std::max(out.values[x].real(), std::abs(xi.values[x]));
    }
    return out;
}

double local_orthogonality_check(const FrequencySet& th,
                                 const std::vector<cplx>& coeffs,
                                 std::int64_t x0, std::size_t len) {
    th.validate();
    if (coeffs.size() != th.thetas.size())
        throw std::invalid_argument("local_orthogonality_check: coefficient count");
    if (std::int64_t(len) < th.unit)
        throw std::invalid_argument(
            "local_orthogonality_check: interval shorter than the separation "
            "scale (uncertainty floor)");
    double denom = 0;
    for (const cplx& a : coeffs) denom += std::norm(a);
    if (denom == 0) return 0.0;
    double m = double(th.modulus);
    double lhs = 0;
    for (std::size_t i = 0; i < len; ++i) {
        double x = double(x0 + std::int64_t(i));
        cplx g = 0;
        for (std::size_t n = 0; n < coeffs.size(); ++n)
            g += coeffs[n] * unit_phase(double(th.thetas[n]) * x / m);
        lhs += std::norm(g);
    }
    return lhs / (denom * double(len));
}

CyclicSignal cyclic_hl_maximal(const CyclicSignal& f) {
    std::size_t M = f.modulus();
    if (M == 0) throw std::invalid_argument("cyclic_hl_maximal: empty signal");
    if (M > (std::size_t(1) << 14))
        throw BudgetError("cyclic_hl_maximal: quadratic scan too large");
    std::vector<double> prefix(3 * M + 1, 0.0);
    for (std::size_t i = 0; i < 3 * M; ++i)
        prefix[i + 1] = prefix[i] + std::abs(f.values[i % M]);
    CyclicSignal out(M);
    std::size_t max_r = M / 2;
    for (std::size_t x = 0; x < M; ++x) {
        double best = 0;
        for (std::size_t r = 0; r <= max_r; ++r) {
            // window [x - r, x + r] read from the tripled prefix array
            std::size_t lo = x + M - r;
            double avg = (prefix[lo + 2 * r + 1] - prefix[lo]) / double(2 * r + 1);
            best = std::max(best, avg);
        }
        out.values[x] = best;
    }
    return out;
}

SmoothnessRow smoothness_check_F(const MultiFreqState& st) {
    std::size_t M = st.f.modulus();
    CyclicSignal hl = cyclic_hl_maximal(st.f);
    int lo_untrunc = default_k_floor();
    int lo_trunc = truncation_k_floor(st.thetas.thetas.size());
    int k_top = top_scale(st.thetas);
    lo_trunc = std::min(lo_trunc, k_top);  // keep at least one scale

    auto quotient = [&](int k_floor) {
        CyclicSignal F = vector_maximal_F(st, k_floor);
        double worst = 0;
        for (std::size_t x = 0; x < M; ++x) {
            double df = std::abs(F.values[(x + 1) % M].real() - F.values[x].real());
            double base = hl.values[x].real();
            if (base > 1e-300) worst = std::max(worst, df / base);
        }
        return worst;
    };

    SmoothnessRow row;
    row.untruncated_quotient = quotient(lo_untrunc);
    row.truncated_quotient = quotient(lo_trunc);
    return row;
}

Log2NResult log2n_experiment(const std::vector<std::size_t>& n_list, int trials,
                             std::size_t M, std::int64_t unit,
                             std::uint64_t seed) {
    if (n_list.empty()) throw std::invalid_argument("log2n_experiment: empty N list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("log2n_experiment: N list must increase");
    if (trials < 1) throw std::invalid_argument("log2n_experiment: trials < 1");

    Log2NResult out;
    std::vector<double> xs, ys;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        std::size_t N = n_list[ni];
        Log2NRow row;
        row.n_freqs = N;
        int k_top_all = 0;
        while ((std::int64_t(1) << (k_top_all + 1)) <= unit) ++k_top_all;
        int k_lo = std::min(truncation_k_floor(N), k_top_all);
        row.scales = parity_scales(k_lo, k_top_all);
        if (row.scales.empty()) row.scales = {k_top_all};

        for (int t = 0; t < trials; ++t) {
            std::uint64_t trial_seed =
                derive_seed(seed, ni * std::size_t(trials) + std::size_t(t));
            splitmix64 rng(derive_seed(trial_seed, 1));
            FrequencySet th =
                random_frequency_set(N, M, unit, derive_seed(trial_seed, 0));
            CyclicSignal f(M);
            double f2 = 0;
            for (std::size_t i = 0; i < M; ++i) {
                f.values[i] = {rng.normal(), rng.normal()};
                f2 += std::norm(f.values[i]);
            }
            MultiFreqState st = make_state(std::move(th), std::move(f), false);
            CyclicSignal mx = multifreq_maximal(st, row.scales);
            double mx2 = 0;
            for (const cplx& v : mx.values) mx2 += std::norm(v);
            double ratio = f2 > 0 ? std::sqrt(mx2 / f2) : 0.0;
            row.max_ratio = std::max(row.max_ratio, ratio);
        }
        double lg = std::log2(double(N));
        row.normalized = row.max_ratio / (1.0 + lg * lg);
        xs.push_back(1.0 + lg * lg);
        ys.push_back(row.max_ratio);
        out.rows.push_back(std::move(row));
    }
    out.fit = fit_line(xs, ys);
    return out;
}

}  // namespace weyl
