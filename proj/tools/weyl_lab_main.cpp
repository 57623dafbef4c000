// weyl-lab: command-line surface over the averaging-operator library.
// Subcommands mirror the library modules; outputs are CSV/JSON chosen per
// subcommand, deterministic for a fixed seed.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weyl/ap_test.hpp"
#include "weyl/experiments.hpp"
#include "weyl/io.hpp"
#include "weyl/kernels.hpp"
#include "weyl/major_arc.hpp"
#include "weyl/martingale.hpp"
#include "weyl/multifreq.hpp"
#include "weyl/paths.hpp"
#include "weyl/rng.hpp"
#include "weyl/signal.hpp"
#include "weyl/util.hpp"
#include "weyl/weyl_sums.hpp"

namespace {

using weyl::cplx;
using ojson = nlohmann::ordered_json;

// Writes to the given path, or stdout for "" / "-".
void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw std::runtime_error("unwritable output path: " + out_path);
    os << content;
    if (!os) throw std::runtime_error("write failed: " + out_path);
}

weyl::ParsedSignal read_signal_file(const std::string& path) {
    if (path == "-") return weyl::read_signal_csv(std::cin);
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open signal file: " + path);
    return weyl::read_signal_csv(is);
}

weyl::SampledPath read_path_file(const std::string& path) {
    if (path == "-") return weyl::read_path_csv(std::cin);
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open path file: " + path);
    return weyl::read_path_csv(is);
}

// Dense window signal carrying the kernel atoms, budget-guarded.
weyl::GridSignal kernel_signal(const weyl::PolynomialKernel& K,
                               std::size_t budget_bytes) {
    if (K.atoms.empty()) throw std::invalid_argument("kernel has no atoms");
    std::size_t span = std::size_t(K.atoms.back() - K.atoms.front()) + 1;
    if (span * sizeof(cplx) > budget_bytes)
        throw weyl::BudgetError("kernel window exceeds --budget-bytes");
    weyl::GridSignal g;
    g.offset = K.atoms.front();
    g.values.assign(span, cplx{0, 0});
    for (std::size_t i = 0; i < K.atoms.size(); ++i)
        g.values[std::size_t(K.atoms[i] - K.atoms.front())] += K.weights[i];
    return g;
}

std::string signal_csv(const weyl::GridSignal& g) {
    std::ostringstream os;
    weyl::write_signal_csv(os, g);
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weyl-lab: discrete polynomial averaging operators, "
                 "multiplier approximations, and variation experiments"};
    app.require_subcommand(1);
    int rc = 0;

    // ---- kernel --------------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "kernel", "Emit the degree-d scale-k averaging kernel as signal CSV");
        auto d = std::make_shared<int>(2);
        auto k = std::make_shared<int>(3);
        auto smooth = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        auto budget = std::make_shared<std::size_t>(std::size_t(1) << 31);
        sub->add_option("--d", *d, "polynomial degree (>= 2)");
        sub->add_option("--k", *k, "dyadic scale");
        sub->add_flag("--smooth", *smooth, "smooth-weighted kernel");
        sub->add_option("--out", *out, "output file (default stdout)");
        sub->add_option("--budget-bytes", *budget, "memory cap for the window");
        sub->callback([=]() {
            weyl::PolynomialKernel K = weyl::build_kernel(*d, *k, *smooth);
            emit(*out, signal_csv(kernel_signal(K, *budget)));
        });
    }

    // ---- convolve ------------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "convolve", "Convolve the averaging kernel with a signal CSV");
        auto d = std::make_shared<int>(2);
        auto k = std::make_shared<int>(3);
        auto smooth = std::make_shared<bool>(false);
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto budget = std::make_shared<std::size_t>(std::size_t(1) << 31);
        sub->add_option("--d", *d, "polynomial degree");
        sub->add_option("--k", *k, "dyadic scale");
        sub->add_flag("--smooth", *smooth, "smooth-weighted kernel");
        sub->add_option("--in", *in, "input signal CSV ('-' = stdin)")->required();
        sub->add_option("--out", *out, "output file (default stdout)");
        sub->add_option("--budget-bytes", *budget, "memory cap");
        sub->callback([=]() {
            weyl::ParsedSignal ps = read_signal_file(*in);
            if (ps.cyclic)
                throw std::invalid_argument(
                    "convolve expects a grid signal (no modulus line)");
            weyl::PolynomialKernel K = weyl::build_kernel(*d, *k, *smooth);
            emit(*out, signal_csv(weyl::convolve(K, ps.grid, *budget)));
        });
    }

    // ---- maximal -------------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "maximal", "Dyadic maximal function of the averaging family");
        auto d = std::make_shared<int>(2);
        auto kmax = std::make_shared<int>(5);
        auto smooth = std::make_shared<bool>(false);
        auto full_n = std::make_shared<bool>(false);
        auto in = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto budget = std::make_shared<std::size_t>(std::size_t(1) << 31);
        sub->add_option("--d", *d, "polynomial degree");
        sub->add_option("--k-max", *kmax, "largest dyadic scale");
        sub->add_flag("--smooth", *smooth, "smooth-weighted kernels");
        sub->add_flag("--full-n", *full_n, "sup over every N, not just powers of 2");
        sub->add_option("--in", *in, "input signal CSV ('-' = stdin)")->required();
        sub->add_option("--out", *out, "output file (default stdout)");
        sub->add_option("--budget-bytes", *budget, "memory cap");
        sub->callback([=]() {
            weyl::ParsedSignal ps = read_signal_file(*in);
            if (ps.cyclic)
                throw std::invalid_argument(
                    "maximal expects a grid signal (no modulus line)");
            emit(*out, signal_csv(weyl::maximal_operator(*d, *kmax, ps.grid,
                                                         *smooth, *full_n,
                                                         *budget)));
        });
    }

    // ---- weyl ----------------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "weyl", "Complete or partial normalized exponential sum");
        auto d = std::make_shared<int>(2);
        auto num = std::make_shared<std::int64_t>(0);
        auto den = std::make_shared<std::int64_t>(1);
        auto N = std::make_shared<std::int64_t>(0);
        auto cache_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        sub->add_option("--d", *d, "polynomial degree");
        sub->add_option("--num", *num, "frequency numerator A");
        sub->add_option("--den", *den, "frequency denominator Q")->required();
        sub->add_option("--N", *N, "partial-sum length (0 = complete sum)");
        sub->add_option("--cache", *cache_path, "append-only sum cache CSV");
        sub->add_option("--out", *out, "output file (default stdout)");
        sub->callback([=]() {
            weyl::RationalFreq f(*num, *den);
            cplx v;
            if (*N > 0) {
                v = weyl::normalized_weyl_sum(*d, *N, f);
            } else if (!cache_path->empty()) {
                weyl::WeylCache cache(*cache_path);
                v = cache.get(*d, f);
            } else {
                v = weyl::complete_weyl_sum(*d, f);
            }
            ojson j;
            j["d"] = *d;
            j["num"] = f.num;
            j["den"] = f.den;
            if (*N > 0) j["N"] = *N;
            j["re"] = v.real();
            j["im"] = v.imag();
            j["abs"] = std::abs(v);
            emit(*out, j.dump() + "\n");
        });
    }

    // ---- approximant ---------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "approximant",
            "Sup error of the arithmetic multiplier approximation at scale k");
        auto d = std::make_shared<int>(2);
        auto ks = std::make_shared<std::vector<int>>();
        auto c = std::make_shared<double>(0.2);
        auto refine = std::make_shared<int>(64);
        auto out = std::make_shared<std::string>();
        sub->add_option("--d", *d, "polynomial degree");
        sub->add_option("--k", *ks, "scale(s); repeat for a sweep")->required();
        sub->add_option("--c", *c, "arc exponent in (0, d/3)");
        sub->add_option("--grid-refine", *refine, "extra nodes per arc");
        sub->add_option("--out", *out, "output file (default stdout)");
        sub->callback([=]() {
            std::ostringstream os;
            for (int k : *ks) {
                weyl::MultiplierErrorRow row =
                    weyl::multiplier_error(*d, k, *c, *refine);
                ojson j;
                j["k"] = row.k;
                j["sup_error"] = row.sup_error;
                j["grid_points"] = row.grid_points;
                os << j.dump() << '\n';
            }
            emit(*out, os.str());
        });
    }

    // ---- jumps ---------------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "jumps", "Greedy lambda-jump count of a sampled path CSV");
        auto in = std::make_shared<std::string>();
        auto lambda = std::make_shared<double>(1.0);
        auto out = std::make_shared<std::string>();
        sub->add_option("--in", *in, "path CSV t,v1[,v2,...] ('-' = stdin)")
            ->required();
        sub->add_option("--lambda", *lambda, "jump threshold (> 0)")->required();
        sub->add_option("--out", *out, "output file (default stdout)");
        sub->callback([=]() {
            weyl::SampledPath p = read_path_file(*in);
            weyl::JumpProfile jp = weyl::jump_count(p, *lambda);
            ojson j;
            j["lambda"] = jp.lambda;
            j["count"] = jp.count;
            j["witness"] = jp.witness;
            emit(*out, j.dump() + "\n");
        });
    }

    // ---- variation -----------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "variation", "r-variation seminorm of a sampled path CSV");
        auto in = std::make_shared<std::string>();
        auto r = std::make_shared<double>(3.0);
        auto vector_mode = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        sub->add_option("--in", *in, "path CSV t,v1[,v2,...] ('-' = stdin)")
            ->required();
        sub->add_option("--r", *r, "variation exponent (> 2)")->required();
        sub->add_flag("--vector", *vector_mode,
                      "l2 vector metric plus per-component values");
        sub->add_option("--out", *out, "output file (default stdout)");
        sub->callback([=]() {
            weyl::SampledPath p = read_path_file(*in);
            ojson j;
            j["r"] = *r;
            if (*vector_mode) {
                weyl::VectorVariation vv = weyl::vector_variation(p, *r);
                j["value"] = vv.value;
                j["components"] = vv.components;
                j["component_l2"] = vv.component_l2;
            } else {
                if (p.dim != 1)
                    throw std::invalid_argument(
                        "variation: multi-component path needs --vector");
                j["value"] = weyl::r_variation(p, *r);
            }
            emit(*out, j.dump() + "\n");
        });
    }

    // ---- lepingle ------------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "lepingle", "Random-trial variation ratio for a scale family");
        auto kind = std::make_shared<std::string>("martingale");
        auto trials = std::make_shared<int>(200);
        auto len = std::make_shared<std::int64_t>(256);
        auto r = std::make_shared<double>(2.1);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        sub->add_option("--kind", *kind, "martingale | convolution");
        sub->add_option("--trials", *trials, "number of random trials");
        sub->add_option("--len", *len, "signal length (power of two)");
        sub->add_option("--r", *r, "variation exponent (> 2)");
        sub->add_option("--seed", *seed, "master RNG seed");
        sub->add_option("--out", *out, "output file (default stdout)");
        sub->callback([=]() {
            weyl::ScaleFamilyKind k;
            if (*kind == "martingale") k = weyl::ScaleFamilyKind::martingale;
            else if (*kind == "convolution") k = weyl::ScaleFamilyKind::convolution;
            else
                throw std::invalid_argument(
                    "lepingle: --kind must be martingale or convolution");
            weyl::LepingleResult lr =
                weyl::lepingle_check(k, *trials, std::size_t(*len), *r, *seed);
            ojson j;
            j["kind"] = *kind;
            j["r"] = *r;
            j["trials"] = *trials;
            j["len"] = *len;
            j["max_ratio"] = lr.max_ratio;
            emit(*out, j.dump() + "\n");
        });
    }

    // ---- multifreq -----------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "multifreq",
            "Worst-case L2 ratio of the multi-frequency maximal operator");
        auto N = std::make_shared<std::int64_t>(8);
        auto trials = std::make_shared<int>(20);
        auto m_exp = std::make_shared<int>(14);
        auto unit_exp = std::make_shared<int>(8);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto k_floor = std::make_shared<int>(-1);
        auto out = std::make_shared<std::string>();
        sub->add_option("--N", *N, "number of separated frequencies");
        sub->add_option("--trials", *trials, "number of random trials");
        sub->add_option("--M", *m_exp, "log2 of the cyclic group size");
        sub->add_option("--unit", *unit_exp, "log2 of the separation unit (cells)");
        sub->add_option("--seed", *seed, "master RNG seed");
        sub->add_option("--k-floor", *k_floor,
                        "smallest scale (default: log^2-driven floor)");
        sub->add_option("--out", *out, "output file (default stdout)");
        sub->callback([=]() {
            if (*N < 1) throw std::invalid_argument("multifreq: --N must be >= 1");
            if (*trials < 1)
                throw std::invalid_argument("multifreq: --trials must be >= 1");
            std::size_t M = std::size_t(1) << *m_exp;
            std::int64_t unit = std::int64_t(1) << *unit_exp;
            int top = 0;
            while ((std::int64_t(1) << (top + 1)) <= unit) ++top;
            int lo = *k_floor >= 0 ? *k_floor
                                   : weyl::truncation_k_floor(std::size_t(*N));
            lo = std::min(lo, top);
            std::vector<int> scales = weyl::parity_scales(lo, top);
            if (scales.empty()) scales = {top};
            double ratio_max = 0;
            for (int t = 0; t < *trials; ++t) {
                std::uint64_t ts = weyl::derive_seed(*seed, std::uint64_t(t));
                weyl::FrequencySet th = weyl::random_frequency_set(
                    std::size_t(*N), M, unit, weyl::derive_seed(ts, 0));
                weyl::splitmix64 rng(weyl::derive_seed(ts, 1));
                weyl::CyclicSignal f(M);
                for (std::size_t i = 0; i < M; ++i)
                    f.values[i] = {rng.normal(), rng.normal()};
                weyl::MultiFreqState st =
                    weyl::make_state(std::move(th), std::move(f), false);
                weyl::CyclicSignal mx = weyl::multifreq_maximal(st, scales);
                double fn = weyl::l2_norm(st.f);
                if (fn > 0) ratio_max = std::max(ratio_max, weyl::l2_norm(mx) / fn);
            }
            double lg = std::log2(double(*N));
            ojson j;
            j["N"] = *N;
            j["ratio_max"] = ratio_max;
            j["ratio_over_log2N"] = ratio_max / (1.0 + lg * lg);
            j["scales"] = scales;
            emit(*out, j.dump() + "\n");
        });
    }

    // ---- experiment ----------------------------------------------------
    {
        auto* sub = app.add_subcommand(
            "experiment", "Run a registered experiment with artifacts");
        auto name = std::make_shared<std::string>();
        auto out_dir = std::make_shared<std::string>();
        auto seed = std::make_shared<std::uint64_t>(1);
        auto config_path = std::make_shared<std::string>();
        auto params = std::make_shared<std::vector<std::string>>();
        auto list_names = std::make_shared<bool>(false);
        sub->add_option("--name", *name, "registered experiment name");
        sub->add_option("--out", *out_dir, "artifact directory (omit to skip)");
        sub->add_option("--seed", *seed, "master RNG seed");
        sub->add_option("--config", *config_path, "key=value parameter file");
        sub->add_option("--param", *params, "key=value override; repeatable");
        sub->add_flag("--list", *list_names, "list registered experiments");
        sub->callback([=, &rc]() {
            if (*list_names) {
                for (const std::string& n : weyl::experiment_names())
                    std::cout << n << '\n';
                return;
            }
            weyl::ExperimentSpec spec;
            spec.name = *name;
            spec.seed = *seed;
            spec.out_dir = *out_dir;
            if (!config_path->empty()) {
                std::ifstream is(*config_path);
                if (!is)
                    throw std::runtime_error("cannot open config: " + *config_path);
                spec.params = weyl::parse_config(is);
            }
            for (const std::string& kv : *params) {
                std::size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--param expects key=value, got '" +
                                                kv + "'");
                spec.params[kv.substr(0, eq)] = kv.substr(eq + 1);  // flags win
            }
            weyl::ExperimentResult res = weyl::run_experiment(spec);
            if (!res.summary.empty()) std::cout << res.summary << '\n';
            if (res.exit_code != 0) std::cerr << res.failure << '\n';
            rc = res.exit_code;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
