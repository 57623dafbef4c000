#include "weyl/weyl_sums.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "weyl/rng.hpp"

namespace weyl {

RationalFreq::RationalFreq(std::int64_t a, std::int64_t q) {
    if (q <= 0) throw std::invalid_argument("RationalFreq: denominator must be positive");
    // normalize numerator into [0, q)
    a %= q;
    if (a < 0) a += q;
    std::int64_t g = gcd64(a, q);
    if (a == 0) {
        num = 0;
        den = 1;
        return;
    }
    num = a / g;
    den = q / g;
}

std::vector<std::int64_t> totient_table(std::int64_t n) {
    std::vector<std::int64_t> phi(std::size_t(n + 1));
    for (std::int64_t i = 0; i <= n; ++i) phi[std::size_t(i)] = i;
    for (std::int64_t p = 2; p <= n; ++p) {
        if (phi[std::size_t(p)] == p) {  // p prime
            for (std::int64_t m = p; m <= n; m += p)
                phi[std::size_t(m)] -= phi[std::size_t(m)] / p;
        }
    }
    return phi;
}

std::vector<RationalFreq> enumerate_shell(int s) {
    if (s < 1) throw std::invalid_argument("enumerate_shell: shell index must be >= 1");
    std::int64_t lo = std::int64_t(1) << (s - 1);
    std::int64_t hi = std::int64_t(1) << s;  // exclusive
    std::vector<RationalFreq> out;
    for (std::int64_t q = lo; q < hi; ++q) {
        if (q == 1) {
            out.emplace_back(0, 1);
            continue;
        }
        for (std::int64_t a = 1; a < q; ++a)
            if (gcd64(a, q) == 1) out.emplace_back(a, q);
    }
    return out;
}

std::vector<RationalFreq> enumerate_denominators_up_to(std::int64_t qmax) {
    if (qmax < 1) throw std::invalid_argument("enumerate_denominators_up_to: qmax >= 1");
    std::vector<RationalFreq> out;
    out.emplace_back(0, 1);
    for (std::int64_t q = 2; q <= qmax; ++q)
        for (std::int64_t a = 1; a < q; ++a)
            if (gcd64(a, q) == 1) out.emplace_back(a, q);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::int64_t pow_mod(std::int64_t base, int exp, std::int64_t mod) {
    std::int64_t r = 1 % mod;
    base %= mod;
    for (int i = 0; i < exp; ++i) r = std::int64_t((__int128)r * base % mod);
    return r;
}

}  // namespace

cplx complete_weyl_sum(int d, const RationalFreq& f, std::int64_t q_cap) {
    if (d < 2) throw std::invalid_argument("complete_weyl_sum: degree must be >= 2");
    std::int64_t q = f.den;
    if (q > q_cap)
        throw std::invalid_argument("complete_weyl_sum: denominator " +
                                    std::to_string(q) + " exceeds cap " +
                                    std::to_string(q_cap));
    if (q == 1) return {1.0, 0.0};
    // Exact phases: A n^d mod Q indexes a shared root-of-unity table.
    std::vector<cplx> roots(static_cast<std::size_t>(q));
    for (std::int64_t m = 0; m < q; ++m)
        roots[std::size_t(m)] = unit_phase(-double(m) / double(q));
    kahan_sum acc;
    for (std::int64_t n = 1; n <= q; ++n) {
        std::int64_t p = pow_mod(n, d, q);
        std::int64_t idx = std::int64_t((__int128)f.num * p % q);
        acc.add(roots[std::size_t(idx)]);
    }
    return acc.value() / double(q);
}

double power_phase_frac(double beta, std::int64_t n, int d) {
    if (n <= 0) throw std::invalid_argument("power_phase_frac: n must be positive");
    if (d < 1 || d > 4) throw std::invalid_argument("power_phase_frac: degree in [1,4]");
    if (n > 10'000'000)
        throw std::invalid_argument("power_phase_frac: n exceeds the 10^7 overflow guard");
    double b = beta - std::floor(beta);  // exact (difference of representables < 1)
    if (b == 0.0) return 0.0;
    // b = m * 2^{-e} with integer m < 2^53.
    int E;
    double mant = std::frexp(b, &E);  // b = mant * 2^E, mant in [0.5, 1)
    std::int64_t m = std::int64_t(std::ldexp(mant, 53));
    std::int64_t e = 53 - E;  // e >= 53 since E <= 0 for b < 1

    unsigned __int128 nd = 1;
    for (int i = 0; i < d; ++i) nd *= (unsigned __int128)n;

    // frac(b * nd) = frac(sum_j digit_j * gamma_j), digits base 2^32,
    // gamma_j = frac(b * 2^{32 j}) exact in one double each.
    double hi = 0, lo = 0;
    for (int j = 0; nd != 0; ++j, nd >>= 32) {
        std::uint64_t digit = std::uint64_t(nd & 0xffffffffULL);
        if (digit == 0) continue;
        std::int64_t shift = 32 * std::int64_t(j);
        double gamma;
        if (shift >= e) {
            gamma = 0.0;
        } else {
            std::int64_t bits = e - shift;
            std::int64_t mm = bits >= 63 ? m : (m & ((std::int64_t(1) << bits) - 1));
            gamma = std::ldexp(double(mm), int(shift - e));
        }
        if (gamma == 0.0) continue;
        two_sum_t p = two_prod(double(digit), gamma);
        // exact accumulation of the products' leading parts
        two_sum_t s = two_sum(hi, p.hi);
        hi = s.hi;
        lo += s.lo + p.lo;
        // keep hi reduced so the running magnitude stays ~1
        double r = std::nearbyint(hi);
        hi -= r;  // exact: both representable, difference <= 0.5 + ulp slack
    }
    double f = hi + lo;
    f -= std::floor(f);
    return f < 1.0 ? f : 0.0;
}

cplx normalized_weyl_sum(int d, std::int64_t N, double beta) {
    if (N <= 0) throw std::invalid_argument("normalized_weyl_sum: N must be positive");
    if (d < 2) throw std::invalid_argument("normalized_weyl_sum: degree must be >= 2");
    kahan_sum acc;
    for (std::int64_t n = 1; n <= N; ++n)
        acc.add(unit_phase(-power_phase_frac(beta, n, d)));
    return acc.value() / double(N);
}

cplx normalized_weyl_sum(int d, std::int64_t N, const RationalFreq& beta) {
    if (N <= 0) throw std::invalid_argument("normalized_weyl_sum: N must be positive");
    if (d < 2) throw std::invalid_argument("normalized_weyl_sum: degree must be >= 2");
    std::int64_t q = beta.den;
    std::vector<cplx> roots(static_cast<std::size_t>(q));
    for (std::int64_t m = 0; m < q; ++m)
        roots[std::size_t(m)] = unit_phase(-double(m) / double(q));
    kahan_sum acc;
    for (std::int64_t n = 1; n <= N; ++n) {
        std::int64_t p = pow_mod(n, d, q);
        std::int64_t idx = std::int64_t((__int128)beta.num * p % q);
        acc.add(roots[std::size_t(idx)]);
    }
    return acc.value() / double(N);
}

cplx weighted_power_phase_sum(int d, std::int64_t n_lo, std::int64_t n_hi,
                              const std::vector<double>& weights, double beta) {
    if (n_hi < n_lo) throw std::invalid_argument("weighted_power_phase_sum: empty range");
    if (weights.size() != std::size_t(n_hi - n_lo + 1))
        throw std::invalid_argument("weighted_power_phase_sum: weight count mismatch");
    kahan_sum acc;
    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        double w = weights[std::size_t(n - n_lo)];
        if (w == 0.0) continue;
        acc.add(w * unit_phase(-power_phase_frac(beta, n, d)));
    }
    return acc.value();
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::vector<HuaRow> hua_scan(int d, std::int64_t q_max, bool primes_only) {
    if (d < 2) throw std::invalid_argument("hua_scan: degree must be >= 2");
    if (q_max < 2) throw std::invalid_argument("hua_scan: q_max must be >= 2");
    std::vector<HuaRow> rows;
    for (std::int64_t q = 2; q <= q_max; ++q) {
        if (primes_only && !is_prime(q)) continue;
        std::vector<cplx> roots(static_cast<std::size_t>(q));
        for (std::int64_t m = 0; m < q; ++m)
            roots[std::size_t(m)] = unit_phase(-double(m) / double(q));
        std::vector<std::int64_t> pw(std::size_t(q + 1));
        for (std::int64_t n = 1; n <= q; ++n) pw[std::size_t(n)] = pow_mod(n, d, q);
        double best = 0;
        for (std::int64_t a = 1; a < q; ++a) {
            if (gcd64(a, q) != 1) continue;
            kahan_sum acc;
            for (std::int64_t n = 1; n <= q; ++n)
                acc.add(roots[std::size_t(a * pw[std::size_t(n)] % q)]);
            best = std::max(best, std::abs(acc.value()) / double(q));
        }
        rows.push_back({q, best, best * std::pow(double(q), 1.0 / d)});
    }
    return rows;
}

bool ArcDecomposition::is_major(double beta) const {
    double b = beta - std::floor(beta);
    for (std::size_t i = 0; i < centers.size(); ++i) {
        double dist = std::abs(b - centers[i].value());
        dist = std::min(dist, 1.0 - dist);  // torus metric
        if (dist <= halfwidths[i]) return true;
    }
    return false;
}

ArcDecomposition make_arcs(int d, std::int64_t N, double c) {
    if (N < 2) throw std::invalid_argument("make_arcs: N must be >= 2");
    if (d < 2) throw std::invalid_argument("make_arcs: degree must be >= 2");
    if (c <= 0 || c >= 1) throw std::invalid_argument("make_arcs: c must lie in (0,1)");
    ArcDecomposition arcs;
    arcs.N = N;
    arcs.d = d;
    arcs.c = c;
    std::int64_t qmax = std::int64_t(std::pow(double(N), c) + 1e-9);
    if (qmax < 1) qmax = 1;
    arcs.centers = enumerate_denominators_up_to(qmax);
    double scale = std::pow(double(N), double(d) - c);
    arcs.halfwidths.reserve(arcs.centers.size());
    for (const auto& f : arcs.centers)
        arcs.halfwidths.push_back(1.0 / (double(f.den) * scale));
    // Disjointness: adjacent arcs (including the wrap pair) must not touch.
    for (std::size_t i = 0; i + 1 < arcs.centers.size(); ++i) {
        double gap = arcs.centers[i + 1].value() - arcs.centers[i].value();
        if (gap <= arcs.halfwidths[i] + arcs.halfwidths[i + 1])
            throw std::runtime_error("make_arcs: arcs overlap at N=" +
                                     std::to_string(N));
    }
    if (arcs.centers.size() > 1) {
        double gap = 1.0 - arcs.centers.back().value();
        if (gap <= arcs.halfwidths.back() + arcs.halfwidths.front())
            throw std::runtime_error("make_arcs: arcs overlap across the wrap");
    }
    return arcs;
}

MinorArcScan minor_arc_decay_scan(int d, const std::vector<std::int64_t>& n_list,
                                  double c, int samples_per_n,
                                  std::uint64_t seed) {
    if (n_list.size() < 2)
        throw std::invalid_argument("minor_arc_decay_scan: need >= 2 values of N");
    for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
        if (n_list[i + 1] <= n_list[i])
            throw std::invalid_argument("minor_arc_decay_scan: N list must increase");
    if (samples_per_n < 1)
        throw std::invalid_argument("minor_arc_decay_scan: samples_per_n >= 1");

    MinorArcScan scan;
    scan.n_values = n_list;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        std::int64_t N = n_list[i];
        ArcDecomposition arcs = make_arcs(d, N, c);
        splitmix64 rng(derive_seed(seed, i));
        double sup = 0;
        std::int64_t accepted = 0, attempts = 0;
        while (accepted < samples_per_n) {
            ++attempts;
            double beta = rng.uniform();
            if (arcs.is_major(beta)) {
                // 99% rejection means the arc budget ate the whole torus
                if (attempts >= 100 * std::int64_t(samples_per_n) &&
                    accepted * 100 < attempts)
                    throw std::runtime_error(
                        "minor_arc_decay_scan: rejection rate above 99% at N=" +
                        std::to_string(N));
                continue;
            }
            ++accepted;
            sup = std::max(sup, std::abs(normalized_weyl_sum(d, N, beta)));
        }
        scan.sup_values.push_back(sup);
        scan.reject_rate.push_back(double(attempts - accepted) / double(attempts));
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        lx.push_back(std::log2(double(n_list[i])));
        ly.push_back(std::log2(scan.sup_values[i]));
    }
    scan.fit = fit_line(lx, ly);
    return scan;
}

WeylCache::WeylCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tok;
        Key k{};
        double re, im;
        std::getline(ss, tok, ',');
        k.d = std::stoi(tok);
        std::getline(ss, tok, ',');
        k.a = std::stoll(tok);
        std::getline(ss, tok, ',');
        k.q = std::stoll(tok);
        std::getline(ss, tok, ',');
        re = std::stod(tok);
        std::getline(ss, tok, ',');
        im = std::stod(tok);
        map_[k] = {re, im};
    }
}

bool WeylCache::contains(int d, const RationalFreq& f) const {
    return map_.count({d, f.num, f.den}) != 0;
}

cplx WeylCache::get(int d, const RationalFreq& f) {
    Key k{d, f.num, f.den};
    auto it = map_.find(k);
    if (it != map_.end()) return it->second;
    cplx v = complete_weyl_sum(d, f);
    map_[k] = v;
    if (!path_.empty()) {
        // single buffered line per record, flushed before close
        std::ofstream out(path_, std::ios::app);
        out << k.d << ',' << k.a << ',' << k.q << ',' << fmt_double(v.real())
            << ',' << fmt_double(v.imag()) << '\n';
    }
    return v;
}

}  // namespace weyl
