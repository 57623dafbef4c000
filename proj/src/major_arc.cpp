#include "weyl/major_arc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "weyl/cutoff.hpp"
#include "weyl/kernels.hpp"
#include "weyl/quadrature.hpp"

namespace weyl {

namespace {

// Largest admissible denominator at scale k.
std::int64_t q_max_at(int k, double c) {
    return std::int64_t(std::floor(std::exp2(c * double(k)) + 1e-9));
}

// Signed distance from beta to the nearest integer translate of center.
double torus_delta(double beta, double center) {
    double delta = beta - center;
    return delta - std::nearbyint(delta);
}

void check_arc_params(int d, int k, double c) {
    int kmin = approximant_k_min(d, c);  // also validates d, c
    if (k < kmin)
        throw std::invalid_argument("arc scale k=" + std::to_string(k) +
                                    " is below the separation threshold k_min=" +
                                    std::to_string(kmin));
}

// The arc centers must be further apart than two halfwidths; anything else
// means the plateau bumps overlap and the multiplier model is wrong.
void check_disjoint(const std::vector<RationalFreq>& centers, double hw, int k) {
    for (std::size_t i = 0; i + 1 < centers.size(); ++i) {
        if (centers[i + 1].value() - centers[i].value() <= 2 * hw)
            throw std::runtime_error("major arcs overlap at scale k=" +
                                     std::to_string(k));
    }
    if (centers.size() >= 2) {
        double wrap = centers.front().value() + 1.0 - centers.back().value();
        if (wrap <= 2 * hw)
            throw std::runtime_error("major arcs overlap across the wrap at scale k=" +
                                     std::to_string(k));
    }
}

}  // namespace

int approximant_k_min(int d, double c) {
    if (d < 2) throw std::invalid_argument("approximant_k_min: need degree >= 2");
    if (!(c > 0))
        throw std::invalid_argument("approximant_k_min: need c > 0");
    if (!(3 * c < d))
        throw std::invalid_argument("approximant_k_min: arc separation needs 3c < d");
    for (int k = 1; k <= 1'000'000; ++k)
        if (c * k + 1.0 < (d - c) * double(k)) return k;
    throw std::invalid_argument("approximant_k_min: no admissible scale below 10^6");
}

double pi_multiplier(int d, int k, double c, double beta) {
    check_arc_params(d, k, c);
    auto centers = enumerate_denominators_up_to(q_max_at(k, c));
    double scale = std::exp2((double(d) - c) * double(k));
    double sum = 0;
    int supports_hit = 0;
    for (const auto& f : centers) {
        double y = scale * torus_delta(beta, f.value());
        if (std::abs(y) < 0.5) ++supports_hit;
        sum += chi_hat_profile(y);
    }
    if (supports_hit >= 2)
        throw std::runtime_error("pi_multiplier: plateau supports overlap at beta=" +
                                 std::to_string(beta));
    return sum;
}

double MajorArcApproximant::arc_halfwidth() const {
    return 0.5 * std::exp2(-(double(d) - c) * double(k));
}

cplx MajorArcApproximant::evaluate(double beta) const {
    double hw = arc_halfwidth();
    double chi_scale = std::exp2((double(d) - c) * double(k));
    double big_scale = std::exp2(double(d) * double(k));
    cplx out = 0;
    for (const auto& t : terms) {
        double delta = torus_delta(beta, t.freq.value());
        if (std::abs(delta) > hw) continue;
        double bump = chi_hat_profile(chi_scale * delta);
        if (bump == 0.0) continue;
        out += t.weight * bump * phi_prime_ft(d, big_scale * delta);
    }
    return out;
}

MajorArcApproximant build_approximant(int d, int k, double c, WeylCache* cache) {
    check_arc_params(d, k, c);
    MajorArcApproximant ap;
    ap.d = d;
    ap.k = k;
    ap.c = c;

    auto fracs = enumerate_denominators_up_to(q_max_at(k, c));
    check_disjoint(fracs, ap.arc_halfwidth(), k);
    ap.candidate_count = fracs.size();
    for (const auto& f : fracs) {
        cplx s = cache ? cache->get(d, f) : complete_weyl_sum(d, f);
        if (std::abs(s) > 1e-14) ap.terms.push_back({f, s});
    }
    return ap;
}

cplx phi_prime_ft(int d, double xi) {
    if (d < 2) throw std::invalid_argument("phi_prime_ft: need degree >= 2");
    double a = std::exp2(-double(d));
    double b = std::exp2(2.0 * double(d));
    double inv_d = 1.0 / double(d);
    auto profile = [d, inv_d](double s) {
        return phi_profile(std::pow(s, inv_d)) /
               (double(d) * std::pow(s, 1.0 - inv_d));
    };
    return profile_ft(profile, a, b, xi);
}

std::vector<ApproximantTerm> shell_terms(const MajorArcApproximant& ap, int s) {
    if (s < 1) throw std::invalid_argument("shell_terms: need shell index >= 1");
    std::int64_t lo = std::int64_t(1) << (s - 1);
    std::int64_t hi = std::int64_t(1) << s;  // exclusive
    std::vector<ApproximantTerm> out;
    for (const auto& t : ap.terms)
        if (t.freq.den >= lo && t.freq.den < hi) out.push_back(t);
    return out;
}

MultiplierErrorRow multiplier_error(int d, int k, double c, int refine_per_arc,
                                    WeylCache* cache) {
    check_arc_params(d, k, c);
    if (refine_per_arc < 0)
        throw std::invalid_argument("multiplier_error: refine_per_arc < 0");
    int log2m = d * k + 3;
    if (log2m > 27)
        throw BudgetError("multiplier_error: frequency grid 2^" +
                          std::to_string(log2m) + " exceeds the memory budget");

    auto ap = build_approximant(d, k, c, cache);
    auto kernel = build_kernel(d, k, true);
    std::size_t M = std::size_t(1) << log2m;
    std::size_t half = M >> 1;

    // Real-input transform via one complex FFT of half length: pack atom
    // weights at even positions into the real part and odd positions into
    // the imaginary part, then unpack both interleaved spectra on the fly.
    std::vector<cplx> z(half, cplx{0, 0});
    for (std::size_t i = 0; i < kernel.atoms.size(); ++i) {
        std::size_t pos = std::size_t(kernel.atoms[i]) & (M - 1);
        if (pos & 1)
            z[pos >> 1] += cplx{0, kernel.weights[i]};
        else
            z[pos >> 1] += cplx{kernel.weights[i], 0};
    }
    fft_pow2_inplace(z, -1);

    // Grid windows where the approximant can be nonzero (one per kept term,
    // clipped to the scanned half of the torus).
    double hw = ap.arc_halfwidth();
    struct Window {
        std::int64_t lo, hi;  // inclusive
    };
    std::vector<Window> windows;
    for (const auto& t : ap.terms) {
        double v = t.freq.value();
        std::int64_t lo = std::int64_t(std::ceil((v - hw) * double(M) - 1e-9));
        std::int64_t hi = std::int64_t(std::floor((v + hw) * double(M) + 1e-9));
        lo = std::max<std::int64_t>(lo, 0);
        hi = std::min<std::int64_t>(hi, std::int64_t(half));
        if (lo <= hi) windows.push_back({lo, hi});
    }
    std::sort(windows.begin(), windows.end(),
              [](const Window& a, const Window& b) { return a.lo < b.lo; });

    double sup = 0;
    std::size_t wi = 0;
    double inv_m = 1.0 / double(M);
    for (std::size_t j = 0; j <= half; ++j) {
        cplx x;
        if (j == half) {
            x = cplx{z[0].real() - z[0].imag(), 0};
        } else {
            cplx a = z[j];
            cplx b = std::conj(z[(half - j) & (half - 1)]);
            cplx even = 0.5 * (a + b);
            cplx odd = cplx{0, -0.5} * (a - b);
            x = even + unit_phase(-double(j) * inv_m) * odd;
        }
        while (wi < windows.size() && std::int64_t(j) > windows[wi].hi) ++wi;
        double err;
        if (wi < windows.size() && std::int64_t(j) >= windows[wi].lo)
            err = std::abs(x - ap.evaluate(double(j) * inv_m));
        else
            err = std::abs(x);
        if (err > sup) sup = err;
    }
    std::vector<cplx>().swap(z);

    // Geometric refinement inside each arc: the uniform grid undersamples
    // the bump transition region, so add nodes clustering toward the center.
    std::size_t refine_points = 0;
    int per_side = refine_per_arc / 2;
    if (per_side > 0) {
        double rho = per_side > 1 ? std::pow(1e-5, 1.0 / double(per_side - 1)) : 1.0;
        std::int64_t n_hi = kernel.n_lo + std::int64_t(kernel.weights.size()) - 1;
        for (const auto& t : ap.terms) {
            double v = t.freq.value();
            double off = hw;
            for (int i = 0; i < per_side; ++i, off *= rho) {
                for (int sgn : {+1, -1}) {
                    double beta = v + sgn * off;
                    beta -= std::floor(beta);
                    cplx kh = weighted_power_phase_sum(d, kernel.n_lo, n_hi,
                                                       kernel.weights, beta);
                    double err = std::abs(kh - ap.evaluate(beta));
                    if (err > sup) sup = err;
                    ++refine_points;
                }
            }
        }
    }

    MultiplierErrorRow row;
    row.k = k;
    row.sup_error = sup;
    row.grid_points = half + 1 + refine_points;
    return row;
}

MultiplierErrorScan multiplier_error_scan(int d, int k_lo, int k_hi, double c,
                                          int refine_per_arc) {
    if (k_lo > k_hi)
        throw std::invalid_argument("multiplier_error_scan: empty scale range");
    MultiplierErrorScan scan;
    std::vector<double> xs, ys;
    for (int k = k_lo; k <= k_hi; ++k) {
        scan.rows.push_back(multiplier_error(d, k, c, refine_per_arc));
        xs.push_back(double(k));
        ys.push_back(std::log2(scan.rows.back().sup_error));
    }
    scan.fit = fit_line(xs, ys);
    return scan;
}

std::vector<cplx> smooth_kernel_multiplier(int d, int k, std::size_t M) {
    if (M == 0) throw std::invalid_argument("smooth_kernel_multiplier: empty grid");
    if (M > (std::size_t(1) << 24))
        throw BudgetError("smooth_kernel_multiplier: grid too large; "
                          "use the streaming error scan instead");
    auto kernel = build_kernel(d, k, true);
    CyclicSignal w(M);
    for (std::size_t i = 0; i < kernel.atoms.size(); ++i)
        w.values[std::size_t(kernel.atoms[i]) % M] += kernel.weights[i];
    return dft(w).values;
}

double residual_maximal_ratio(int d, double c, int k_lo, int k_hi,
                              const CyclicSignal& f) {
    if (k_lo > k_hi)
        throw std::invalid_argument("residual_maximal_ratio: empty scale range");
    std::size_t M = f.modulus();
    if (M == 0) throw std::invalid_argument("residual_maximal_ratio: empty signal");

    CyclicSignal fhat = dft(f);
    std::vector<double> sup_abs(M, 0.0);
    std::vector<double> square_sum(M, 0.0);
    for (int k = k_lo; k <= k_hi; ++k) {
        auto ap = build_approximant(d, k, c);
        auto mult = smooth_kernel_multiplier(d, k, M);
        CyclicSignal prod(M);
        for (std::size_t j = 0; j < M; ++j) {
            cplx m = mult[j] - ap.evaluate(double(j) / double(M));
            square_sum[j] += std::norm(m);
            prod.values[j] = m * fhat.values[j];
        }
        CyclicSignal g = idft(prod);
        for (std::size_t j = 0; j < M; ++j)
            sup_abs[j] = std::max(sup_abs[j], std::abs(g.values[j]));
    }

    double lhs = std::sqrt(pairwise_sum([&] {
        std::vector<double> sq(M);
        for (std::size_t j = 0; j < M; ++j) sq[j] = sup_abs[j] * sup_abs[j];
        return sq;
    }()));
    double rhs = std::sqrt(*std::max_element(square_sum.begin(), square_sum.end())) *
                 l2_norm(f);
    if (rhs < 1e-300) return 0.0;
    return lhs / rhs;
}

}  // namespace weyl
