#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "weyl/cutoff.hpp"
#include "weyl/kernels.hpp"
#include "weyl/major_arc.hpp"
#include "weyl/rng.hpp"
#include "weyl/signal.hpp"
#include "weyl/util.hpp"
#include "weyl/weyl_sums.hpp"

using namespace weyl;

TEST_CASE("smallest admissible arc scale") {
    CHECK(approximant_k_min(2, 0.2) == 1);
    CHECK(approximant_k_min(2, 0.5) == 2);
    CHECK(approximant_k_min(3, 0.2) == 1);
    CHECK_THROWS_AS(approximant_k_min(2, 0.7), std::invalid_argument);  // 3c >= d
    CHECK_THROWS_AS(approximant_k_min(1, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(approximant_k_min(2, 0.0), std::invalid_argument);
}

TEST_CASE("plateau-sum multiplier values") {
    int d = 2, k = 6;
    double c = 0.2;
    // Exactly 1 on every arc center (the plateau of its own bump, all other
    // bumps are supported too far away to contribute).
    for (auto f : {RationalFreq(0, 1), RationalFreq(1, 2)})
        CHECK(pi_multiplier(d, k, c, f.value()) == doctest::Approx(1.0).epsilon(1e-14));
    // Far from every center with small denominator: identically zero.
    CHECK(pi_multiplier(d, k, c, 0.123456) == 0.0);
    // Bounded by 1 everywhere.
    splitmix64 rng{2};
    for (int i = 0; i < 200; ++i) {
        double v = pi_multiplier(d, k, c, rng.uniform());
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
    }
    CHECK_THROWS_AS(pi_multiplier(2, 0, 0.2, 0.5), std::invalid_argument);
}

TEST_CASE("approximant term bookkeeping") {
    auto ap = build_approximant(2, 6, 0.2);
    CHECK(ap.candidate_count == 2);  // 0/1 and 1/2
    REQUIRE(ap.terms.size() == 1);   // the degree-2 sum at 1/2 vanishes
    CHECK(ap.terms[0].freq == RationalFreq(0, 1));
    CHECK(std::abs(ap.terms[0].weight - cplx(1, 0)) < 1e-14);
    CHECK(ap.arc_halfwidth() == doctest::Approx(0.5 * std::exp2(-1.8 * 6)).epsilon(1e-13));

    auto big = build_approximant(2, 12, 0.2);
    CHECK(big.candidate_count == 10);  // all reduced fractions with Q <= 5
    CHECK(big.terms.size() == 9);      // 1/2 dropped, everything else kept
    for (std::size_t i = 1; i < big.terms.size(); ++i)
        CHECK(big.terms[i - 1].freq < big.terms[i].freq);
    for (const auto& t : big.terms) {
        cplx expect = complete_weyl_sum(2, t.freq);
        CHECK(std::abs(t.weight - expect) < 1e-14);
    }
}

TEST_CASE("approximant evaluation on and off the arcs") {
    auto ap = build_approximant(2, 12, 0.2);
    double mass = phi_mass();
    for (const auto& t : ap.terms) {
        cplx at_center = ap.evaluate(t.freq.value());
        CHECK(std::abs(at_center - t.weight * phi_prime_ft(2, 0.0)) < 1e-12);
        // The zero-frequency transform of the reweighted bump is the bump mass.
        CHECK(std::abs(phi_prime_ft(2, 0.0) - cplx(mass, 0)) < 1e-8);
    }
    // Off every arc the model vanishes identically.
    CHECK(std::abs(ap.evaluate(0.15)) == 0.0);
    CHECK(std::abs(ap.evaluate(0.41)) == 0.0);
}

TEST_CASE("transform of the reweighted bump against a quadrature oracle") {
    // After the degree-d substitution the transform integrates the original
    // bump against a chirp: int phi(t) e(-xi t^d) dt.
    for (double xi : {0.0, 0.8, 3.7}) {
        cplx lib = phi_prime_ft(2, xi);
        const int n = 1 << 15;
        kahan_sum acc;
        double lo = 0.5, hi = 4.0, h = (hi - lo) / n;
        for (int i = 0; i <= n; ++i) {
            double t = lo + i * h;
            double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc.add(w * phi_profile(t) * unit_phase(-xi * t * t));
        }
        cplx ref = acc.value() * (h / 3.0);
        CHECK(std::abs(lib - ref) < 1e-8);
    }
}

TEST_CASE("shell decomposition of the approximant") {
    auto ap = build_approximant(2, 12, 0.2);
    std::size_t total = 0;
    double prev_bound = 2.0;
    for (int s = 1; s <= 3; ++s) {
        auto terms = shell_terms(ap, s);
        total += terms.size();
        double mx = 0;
        for (const auto& t : terms) {
            CHECK(t.freq.den >= (std::int64_t(1) << (s - 1)));
            CHECK(t.freq.den < (std::int64_t(1) << s));
            mx = std::max(mx, std::abs(t.weight));
        }
        // Square-root cancellation shell by shell: max |S| <= 2 * 2^{-s/2}.
        CHECK(mx <= 2.0 * std::exp2(-0.5 * s) + 1e-12);
        CHECK(mx <= prev_bound);
        prev_bound = 2.0 * std::exp2(-0.5 * s) + 1e-12;
    }
    CHECK(total == ap.terms.size());
    // Pinned value: the shell holding Q = 2, 3 peaks at |S(1/3)| = 3^{-1/2}.
    auto s2 = shell_terms(ap, 2);
    double mx = 0;
    for (const auto& t : s2) mx = std::max(mx, std::abs(t.weight));
    CHECK(mx == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(shell_terms(ap, 0), std::invalid_argument);
}

TEST_CASE("multiplier error row: structure and sup property") {
    int d = 2, k = 6;
    double c = 0.2;
    auto row = multiplier_error(d, k, c, 16);
    CHECK(row.k == k);
    CHECK(row.sup_error > 0.0);
    CHECK(row.sup_error < 2.0);
    CHECK(row.grid_points == (std::size_t(1) << (d * k + 2)) + 1 + 16);

    // The reported sup dominates the pointwise error at arbitrary probes.
    auto ap = build_approximant(d, k, c);
    auto kernel = build_kernel(d, k, true);
    std::int64_t n_hi = kernel.n_lo + std::int64_t(kernel.weights.size()) - 1;
    splitmix64 rng{8};
    for (int i = 0; i < 20; ++i) {
        double beta = 0.5 * rng.uniform();  // scanned half of the torus
        cplx kh = weighted_power_phase_sum(d, kernel.n_lo, n_hi, kernel.weights, beta);
        double err = std::abs(kh - ap.evaluate(beta));
        CHECK(err <= row.sup_error + 1e-9);
    }
    CHECK_THROWS_AS(multiplier_error(2, 13, 0.2, 16), BudgetError);
    CHECK_THROWS_AS(multiplier_error(2, 6, 0.2, -1), std::invalid_argument);
}

TEST_CASE("multiplier error scan bookkeeping") {
    auto scan = multiplier_error_scan(2, 6, 7, 0.2, 16);
    REQUIRE(scan.rows.size() == 2);
    CHECK(scan.rows[0].k == 6);
    CHECK(scan.rows[1].k == 7);
    CHECK(scan.fit.n == 2);
    CHECK_THROWS_AS(multiplier_error_scan(2, 7, 6, 0.2, 16), std::invalid_argument);
}

TEST_CASE("cyclic multiplier equals the transform of the folded kernel") {
    int d = 2, k = 2;
    std::size_t M = 1024;
    auto mult = smooth_kernel_multiplier(d, k, M);
    REQUIRE(mult.size() == M);
    auto kernel = build_kernel(d, k, true);
    CyclicSignal folded(M);
    for (std::size_t i = 0; i < kernel.atoms.size(); ++i)
        folded.values[std::size_t(kernel.atoms[i]) % M] += kernel.weights[i];
    CyclicSignal fh = dft(folded);
    for (std::size_t j = 0; j < M; ++j) CHECK(std::abs(mult[j] - fh.values[j]) < 1e-9);
    CHECK_THROWS_AS(smooth_kernel_multiplier(2, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(smooth_kernel_multiplier(2, 2, std::size_t(1) << 25), BudgetError);
}

TEST_CASE("residual maximal ratio honors its square-function budget") {
    splitmix64 rng{12};
    for (int trial = 0; trial < 5; ++trial) {
        CyclicSignal f(std::size_t(1) << 12);
        for (auto& z : f.values) z = {rng.normal(), rng.normal()};
        double ratio = residual_maximal_ratio(2, 0.2, 4, 6, f);
        CHECK(ratio >= 0.0);
        CHECK(ratio <= 1.0 + 1e-6);
    }
    CyclicSignal zero(std::size_t(256));
    CHECK(residual_maximal_ratio(2, 0.2, 4, 5, zero) == 0.0);
}
