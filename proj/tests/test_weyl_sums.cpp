#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <vector>

#include "weyl/rng.hpp"
#include "weyl/util.hpp"
#include "weyl/weyl_sums.hpp"

using namespace weyl;

namespace {

std::int64_t pow_mod_ref(std::int64_t base, int exp, std::int64_t mod) {
    __int128 r = 1 % mod;
    __int128 b = base % mod;
    for (int i = 0; i < exp; ++i) r = r * b % mod;
    return std::int64_t(r);
}

// Independent reference: phases from modular arithmetic, long double sums.
cplx reference_complete_sum(int d, std::int64_t a, std::int64_t q) {
    long double re = 0, im = 0;
    for (std::int64_t n = 1; n <= q; ++n) {
        std::int64_t ph = std::int64_t((__int128)a * pow_mod_ref(n, d, q) % q);
        long double ang = -2.0L * 3.14159265358979323846264338327950288L *
                          (long double)(ph) / (long double)(q);
        re += std::cos((double)ang);
        im += std::sin((double)ang);
    }
    return {double(re / q), double(im / q)};
}

}  // namespace

TEST_CASE("RationalFreq reduces and normalizes") {
    RationalFreq a(2, 4);
    CHECK(a.num == 1);
    CHECK(a.den == 2);
    RationalFreq b(5, 3);
    CHECK(b.num == 2);
    CHECK(b.den == 3);
    RationalFreq c(-1, 3);
    CHECK(c.num == 2);
    CHECK(c.den == 3);
    RationalFreq z(0, 7);
    CHECK(z.num == 0);
    CHECK(z.den == 1);
    CHECK_THROWS_AS(RationalFreq(1, 0), std::invalid_argument);
    CHECK(RationalFreq(1, 3) < RationalFreq(1, 2));
}

TEST_CASE("totient_table matches brute-force gcd counts") {
    auto phi = totient_table(200);
    for (std::int64_t n = 1; n <= 200; ++n) {
        std::int64_t cnt = 0;
        for (std::int64_t a = 1; a <= n; ++a)
            if (gcd64(a, n) == 1) ++cnt;
        CHECK(phi[std::size_t(n)] == cnt);
    }
}

TEST_CASE("shell enumeration counts and membership") {
    auto s1 = enumerate_shell(1);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0] == RationalFreq(0, 1));

    auto s2 = enumerate_shell(2);  // denominators 2 and 3
    CHECK(s2.size() == 3);
    std::set<std::pair<std::int64_t, std::int64_t>> got;
    for (auto& f : s2) got.insert({f.num, f.den});
    CHECK(got.count({1, 2}) == 1);
    CHECK(got.count({1, 3}) == 1);
    CHECK(got.count({2, 3}) == 1);

    // Totient sum over [16, 32) equals the shell size; every entry reduced.
    auto s5 = enumerate_shell(5);
    CHECK(s5.size() == 236);
    auto phi = totient_table(31);
    std::int64_t expect = 0;
    for (std::int64_t q = 16; q < 32; ++q) expect += phi[std::size_t(q)];
    CHECK(std::int64_t(s5.size()) == expect);
    for (auto& f : s5) {
        CHECK(f.den >= 16);
        CHECK(f.den < 32);
        CHECK(gcd64(f.num, f.den) == 1);
    }
    CHECK_THROWS_AS(enumerate_shell(0), std::invalid_argument);
}

TEST_CASE("enumerate_denominators_up_to is sorted, complete, reduced") {
    auto all = enumerate_denominators_up_to(5);
    // 1 + phi(2) + phi(3) + phi(4) + phi(5) = 1+1+2+2+4
    CHECK(all.size() == 10);
    CHECK(all.front() == RationalFreq(0, 1));
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(all[i - 1] < all[i]);
}

TEST_CASE("complete Weyl sums: pinned closed-form values") {
    // Degree 2: S(0/1) = 1, S(1/2) = 0, |S(1/3)|^2 = 1/3.
    CHECK(std::abs(complete_weyl_sum(2, RationalFreq(0, 1)) - cplx(1, 0)) < 1e-14);
    CHECK(std::abs(complete_weyl_sum(2, RationalFreq(1, 2))) < 1e-14);
    CHECK(std::norm(complete_weyl_sum(2, RationalFreq(1, 3))) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // Degree 2 at odd primes: |S| = p^{-1/2} exactly, every residue class.
    for (std::int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
        for (std::int64_t a = 1; a < p; ++a) {
            double mag = std::abs(complete_weyl_sum(2, RationalFreq(a, p)));
            CHECK(mag == doctest::Approx(1.0 / std::sqrt(double(p))).epsilon(1e-11));
        }
    }

    // Degree 3 at primes p = 2 mod 3: cubing permutes residues, so S = 0.
    for (std::int64_t p : {2, 5, 11, 17, 23}) {
        CHECK(std::abs(complete_weyl_sum(3, RationalFreq(1, p))) < 1e-12);
    }
    // p = 3 likewise (n^3 = n mod 3).
    CHECK(std::abs(complete_weyl_sum(3, RationalFreq(1, 3))) < 1e-12);
}

TEST_CASE("complete Weyl sums agree with the modular-phase reference") {
    for (int d : {2, 3, 4}) {
        for (std::int64_t q = 1; q <= 50; ++q) {
            for (std::int64_t a = (q == 1 ? 0 : 1); a < std::max<std::int64_t>(q, 1); ++a) {
                if (q > 1 && gcd64(a, q) != 1) continue;
                cplx lib = complete_weyl_sum(d, RationalFreq(a, q));
                cplx ref = reference_complete_sum(d, a, q);
                CHECK(std::abs(lib - ref) < 1e-12);
            }
        }
    }
}

TEST_CASE("complete Weyl sum conjugation symmetry") {
    for (std::int64_t q : {5, 7, 12, 16}) {
        for (std::int64_t a = 1; a < q; ++a) {
            if (gcd64(a, q) != 1) continue;
            cplx s = complete_weyl_sum(2, RationalFreq(a, q));
            cplx t = complete_weyl_sum(2, RationalFreq(q - a, q));
            CHECK(std::abs(s - std::conj(t)) < 1e-13);
        }
    }
    CHECK_THROWS_AS(complete_weyl_sum(1, RationalFreq(1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(complete_weyl_sum(2, RationalFreq(1, 101), 100), std::invalid_argument);
}

TEST_CASE("partial sums collapse to complete sums on full periods") {
    // N = m Q: the normalized partial sum equals the complete sum.
    for (int d : {2, 3}) {
        RationalFreq f(2, 5);
        cplx full = complete_weyl_sum(d, f);
        for (std::int64_t m : {1, 3, 10}) {
            cplx part = normalized_weyl_sum(d, 5 * m, f);
            CHECK(std::abs(part - full) < 1e-12);
        }
    }
}

TEST_CASE("real-frequency partial sums match the rational path on dyadic rationals") {
    // beta = 3/8 is exact in binary, so both paths see the same phases.
    for (int d : {2, 3}) {
        for (std::int64_t N : {16, 100, 999}) {
            cplx a = normalized_weyl_sum(d, N, 3.0 / 8.0);
            cplx b = normalized_weyl_sum(d, N, RationalFreq(3, 8));
            CHECK(std::abs(a - b) < 1e-12);
        }
    }
}

TEST_CASE("power_phase_frac does exact phase reduction") {
    // Dyadic rational beta: compare against modular arithmetic.
    double beta = 5.0 / 64.0;
    for (int d : {2, 3, 4}) {
        for (std::int64_t n :
             {std::int64_t(1), std::int64_t(7), std::int64_t(1000),
              std::int64_t(123456), std::int64_t(1) << 20}) {
            std::int64_t ph = std::int64_t((__int128)5 * pow_mod_ref(n, d, 64) % 64);
            double expect = double(ph) / 64.0;
            CHECK(power_phase_frac(beta, n, d) == doctest::Approx(expect).epsilon(1e-13));
        }
    }
    // Generic beta, small n: direct long double is adequate for comparison.
    splitmix64 rng{3};
    for (int i = 0; i < 100; ++i) {
        double beta2 = rng.uniform();
        std::int64_t n = 1 + std::int64_t(rng.below(1000));
        long double prod = (long double)beta2 * n * n;
        double expect = double(prod - std::floor((double)prod));
        double got = power_phase_frac(beta2, n, 2);
        double diff = std::abs(got - expect);
        diff = std::min(diff, 1.0 - diff);  // wrap-around
        CHECK(diff < 1e-9);
    }
}

TEST_CASE("weighted phase sum with unit weights matches the plain sum") {
    int d = 2;
    std::int64_t N = 500;
    double beta = 0.2137;
    std::vector<double> w(std::size_t(N), 1.0);
    cplx a = weighted_power_phase_sum(d, 1, N, w, beta);
    cplx b = normalized_weyl_sum(d, N, beta);
    CHECK(std::abs(a - cplx(double(N), 0) * b) < 1e-9 * double(N));
}

TEST_CASE("hua_scan rows at small primes") {
    auto rows = hua_scan(2, 97, true);
    REQUIRE(rows.size() == 25);  // primes up to 97
    for (auto& r : rows) {
        CHECK(is_prime(r.q));
        if (r.q == 2) {
            CHECK(r.scaled < 1e-12);  // the single reduced fraction 1/2 kills the sum
        } else {
            CHECK(std::abs(r.scaled - 1.0) < 1e-9);
        }
    }
    // Composite denominators appear when primes_only is off.
    auto all = hua_scan(2, 10, false);
    CHECK(all.size() == 9);  // q = 2..10
    for (auto& r : all) CHECK(r.scaled <= 2.0 + 1e-9);
}

TEST_CASE("arc decomposition geometry") {
    auto arcs = make_arcs(2, 1 << 10, 0.2);
    // Q <= N^c = 2^2 = 4: centers are the reduced fractions with Q <= 4.
    auto expect = enumerate_denominators_up_to(4);
    REQUIRE(arcs.centers.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(arcs.centers[i] == expect[i]);
        double hw = 1.0 / (double(expect[i].den) * std::pow(2.0, 10.0 * 1.8));
        CHECK(arcs.halfwidths[i] == doctest::Approx(hw).epsilon(1e-12));
    }
    // Disjointness: consecutive arcs do not touch (gaps >= 1/(Q Q') >> widths).
    for (std::size_t i = 1; i < arcs.centers.size(); ++i) {
        double gap = arcs.centers[i].value() - arcs.centers[i - 1].value();
        CHECK(gap > arcs.halfwidths[i] + arcs.halfwidths[i - 1]);
    }
    CHECK(arcs.is_major(0.0));
    CHECK(arcs.is_major(0.5));
    CHECK(arcs.is_major(1.0 / 3.0 + 0.25 * arcs.halfwidths[0]));
    CHECK_FALSE(arcs.is_major(0.123456));
    CHECK(arcs.is_major(1.0 - 1e-12));  // wraps to the 0/1 arc
}

TEST_CASE("minor-arc scan runs, decays, and is deterministic") {
    std::vector<std::int64_t> ns{256, 512, 1024};
    auto a = minor_arc_decay_scan(2, ns, 0.2, 60, 99);
    auto b = minor_arc_decay_scan(2, ns, 0.2, 60, 99);
    REQUIRE(a.sup_values.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.sup_values[i] == b.sup_values[i]);
        CHECK(a.sup_values[i] > 0.0);
        CHECK(a.sup_values[i] <= 1.0);
        CHECK(a.reject_rate[i] >= 0.0);
        CHECK(a.reject_rate[i] < 0.99);
    }
    CHECK(a.fit.n == 3);
    CHECK_THROWS_AS(minor_arc_decay_scan(2, std::vector<std::int64_t>{512, 256}, 0.2, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("WeylCache computes, records, and reloads") {
    namespace fs = std::filesystem;
    fs::path p = fs::temp_directory_path() / "weyl_cache_test.csv";
    std::error_code ec;
    fs::remove(p, ec);
    {
        WeylCache cache(p.string());
        CHECK(cache.size() == 0);
        cplx s = cache.get(2, RationalFreq(1, 3));
        CHECK(std::abs(s - complete_weyl_sum(2, RationalFreq(1, 3))) < 1e-15);
        CHECK(cache.contains(2, RationalFreq(1, 3)));
        CHECK_FALSE(cache.contains(3, RationalFreq(1, 3)));
        cache.get(3, RationalFreq(2, 7));
        CHECK(cache.size() == 2);
    }
    {
        WeylCache reloaded(p.string());
        CHECK(reloaded.size() == 2);
        CHECK(reloaded.contains(2, RationalFreq(1, 3)));
        cplx s = reloaded.get(2, RationalFreq(1, 3));  // served from memory
        CHECK(std::abs(s - complete_weyl_sum(2, RationalFreq(1, 3))) < 1e-12);
    }
    fs::remove(p, ec);
}

TEST_CASE("is_prime on small cases") {
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK_FALSE(is_prime(4));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(91));
    CHECK(is_prime(997));
}
