#include "weyl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "weyl/ap_test.hpp"
#include "weyl/io.hpp"
#include "weyl/kernels.hpp"
#include "weyl/major_arc.hpp"
#include "weyl/martingale.hpp"
#include "weyl/multifreq.hpp"
#include "weyl/util.hpp"
#include "weyl/weyl_sums.hpp"

namespace weyl {

namespace {

using ojson = nlohmann::ordered_json;

// Reads typed parameters out of the flat map, remembering which keys are
// legal so that anything left over is rejected as unknown.
class ParamReader {
public:
    explicit ParamReader(const std::map<std::string, std::string>& params)
        : params_(params) {}

    std::int64_t get_int(const std::string& key, std::int64_t dflt) {
        const std::string* raw = fetch(key);
        if (!raw) return dflt;
        try {
            std::size_t pos = 0;
            std::int64_t v = std::stoll(*raw, &pos);
            if (pos != raw->size()) throw std::invalid_argument("junk");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("parameter '" + key +
                                        "': bad integer '" + *raw + "'");
        }
    }

    double get_double(const std::string& key, double dflt) {
        const std::string* raw = fetch(key);
        if (!raw) return dflt;
        try {
            std::size_t pos = 0;
            double v = std::stod(*raw, &pos);
            if (pos != raw->size()) throw std::invalid_argument("junk");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("parameter '" + key + "': bad number '" +
                                        *raw + "'");
        }
    }

    std::string get_string(const std::string& key, const std::string& dflt) {
        const std::string* raw = fetch(key);
        return raw ? *raw : dflt;
    }

    std::vector<std::int64_t> get_int_list(const std::string& key,
                                           const std::string& dflt) {
        const std::string* raw = fetch(key);
        return parse_list<std::int64_t>(raw ? *raw : dflt, key);
    }

    std::vector<double> get_double_list(const std::string& key,
                                        const std::string& dflt) {
        const std::string* raw = fetch(key);
        return parse_list<double>(raw ? *raw : dflt, key);
    }

    // Rejects any supplied key that no get_* call has claimed.
    void finish() const { reject_unknown_keys(params_, claimed_); }

private:
    const std::string* fetch(const std::string& key) {
        claimed_.push_back(key);
        auto it = params_.find(key);
        return it == params_.end() ? nullptr : &it->second;
    }

    template <typename T>
    std::vector<T> parse_list(const std::string& text, const std::string& key) {
        std::vector<T> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t pos = 0;
                if constexpr (std::is_same_v<T, std::int64_t>) {
                    out.push_back(std::stoll(item, &pos));
                } else {
                    out.push_back(std::stod(item, &pos));
                }
                if (pos != item.size()) throw std::invalid_argument("junk");
            } catch (const std::exception&) {
                throw std::invalid_argument("parameter '" + key +
                                            "': bad list item '" + item + "'");
            }
        }
        if (out.empty())
            throw std::invalid_argument("parameter '" + key + "': empty list");
        return out;
    }

    const std::map<std::string, std::string>& params_;
    std::vector<std::string> claimed_;
};

void write_artifact(const ExperimentSpec& spec, const std::string& fname,
                    const std::string& content, ExperimentResult& res) {
    if (spec.out_dir.empty()) return;
    std::filesystem::create_directories(spec.out_dir);
    std::filesystem::path p = std::filesystem::path(spec.out_dir) / fname;
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("unwritable output path: " + p.string());
    os << content;
    if (!os) throw std::runtime_error("write failed: " + p.string());
    res.artifacts.push_back(p.string());
}

// One embedded assertion: on failure records the failing row and flips the
// exit code, leaving earlier artifacts in place for inspection.
struct Asserter {
    ExperimentResult& res;

    void require(bool ok, const std::string& row) {
        if (ok || res.exit_code == 1) return;
        res.exit_code = 1;
        res.failure = row;
    }
};

std::string svg_of(const Plot& p) {
    std::ostringstream os;
    write_svg_plot(os, p);
    return os.str();
}

// ---- hua-scan ----------------------------------------------------------

void run_hua_scan(ParamReader& pr, const ExperimentSpec& spec,
                  ExperimentResult& res) {
    int d = int(pr.get_int("d", 2));
    std::int64_t q_max = pr.get_int("q_max", 97);
    bool primes_only = pr.get_int("primes_only", 1) != 0;
    pr.finish();

    std::vector<HuaRow> rows = hua_scan(d, q_max, primes_only);

    std::ostringstream csv, jsonl;
    csv << "q,max_norm_sum,scaled\n";
    Plot plot;
    plot.title = "Normalized Weyl-sum maxima, degree " + std::to_string(d);
    plot.xlabel = "denominator Q";
    plot.ylabel = "max_A |S(A/Q)| * Q^(1/d)";
    PlotSeries s;
    s.label = "scaled max";
    s.line = false;
    double worst = 0;
    for (const HuaRow& r : rows) {
        csv << r.q << ',' << fmt_double(r.max_norm_sum) << ','
            << fmt_double(r.scaled) << '\n';
        ojson j;
        j["q"] = r.q;
        j["max_norm_sum"] = r.max_norm_sum;
        j["scaled"] = r.scaled;
        jsonl << j.dump() << '\n';
        s.x.push_back(double(r.q));
        s.y.push_back(r.scaled);
        worst = std::max(worst, r.scaled);
    }
    plot.series.push_back(std::move(s));
    write_artifact(spec, "hua-scan.csv", csv.str(), res);
    write_artifact(spec, "hua-scan.jsonl", jsonl.str(), res);
    write_artifact(spec, "hua-scan.svg", svg_of(plot), res);

    Asserter a{res};
    for (const HuaRow& r : rows) {
        std::string row_text = "q=" + std::to_string(r.q) +
                               " scaled=" + fmt_double(r.scaled);
        if (d == 2 && r.q % 2 == 1 && r.q > 1 && is_prime(r.q))
            a.require(std::abs(r.scaled - 1.0) <= 1e-9,
                      "hua-scan: odd-prime square-sum magnitude off unity: " +
                          row_text);
        if (d == 3) a.require(r.scaled <= 2.0, "hua-scan: cube bound: " + row_text);
        a.require(std::isfinite(r.scaled), "hua-scan: non-finite: " + row_text);
    }

    ojson sum;
    sum["experiment"] = "hua-scan";
    sum["d"] = d;
    sum["q_max"] = q_max;
    sum["rows"] = rows.size();
    sum["max_scaled"] = worst;
    sum["pass"] = res.exit_code == 0;
    res.summary = sum.dump();
}

// ---- minor-arc-decay ---------------------------------------------------

void run_minor_arc_decay(ParamReader& pr, const ExperimentSpec& spec,
                         ExperimentResult& res) {
    int d = int(pr.get_int("d", 2));
    double c = pr.get_double("c", 0.2);
    int lo = int(pr.get_int("n_exp_lo", 8));
    int hi = int(pr.get_int("n_exp_hi", 14));
    int samples = int(pr.get_int("samples", 500));
    pr.finish();
    if (lo > hi) throw std::invalid_argument("minor-arc-decay: n_exp_lo > n_exp_hi");

    std::vector<std::int64_t> n_list;
    for (int e = lo; e <= hi; ++e) n_list.push_back(std::int64_t(1) << e);
    MinorArcScan scan = minor_arc_decay_scan(d, n_list, c, samples, spec.seed);

    std::ostringstream csv, jsonl;
    csv << "N,sup,reject_rate\n";
    Plot plot;
    plot.title = "Off-arc normalized sum decay, degree " + std::to_string(d);
    plot.xlabel = "N";
    plot.ylabel = "sup over sampled off-arc frequencies";
    plot.logx = plot.logy = true;
    PlotSeries s;
    s.label = "observed sup";
    for (std::size_t i = 0; i < scan.n_values.size(); ++i) {
        csv << scan.n_values[i] << ',' << fmt_double(scan.sup_values[i]) << ','
            << fmt_double(scan.reject_rate[i]) << '\n';
        ojson j;
        j["N"] = scan.n_values[i];
        j["sup"] = scan.sup_values[i];
        j["reject_rate"] = scan.reject_rate[i];
        jsonl << j.dump() << '\n';
        s.x.push_back(double(scan.n_values[i]));
        s.y.push_back(scan.sup_values[i]);
    }
    plot.series.push_back(std::move(s));
    write_artifact(spec, "minor-arc-decay.csv", csv.str(), res);
    write_artifact(spec, "minor-arc-decay.jsonl", jsonl.str(), res);
    write_artifact(spec, "minor-arc-decay.svg", svg_of(plot), res);

    Asserter a{res};
    a.require(scan.fit.slope < -0.05,
              "minor-arc-decay: fitted slope " + fmt_double(scan.fit.slope) +
                  " not below -0.05");
    a.require(scan.fit.residual_rms < 0.5,
              "minor-arc-decay: fit residual " + fmt_double(scan.fit.residual_rms) +
                  " not below 0.5");

    ojson sum;
    sum["experiment"] = "minor-arc-decay";
    sum["d"] = d;
    sum["c"] = c;
    sum["samples"] = samples;
    sum["slope"] = scan.fit.slope;
    sum["residual_rms"] = scan.fit.residual_rms;
    sum["pass"] = res.exit_code == 0;
    res.summary = sum.dump();
}

// ---- multiplier-error-decay -------------------------------------------

void run_multiplier_error_decay(ParamReader& pr, const ExperimentSpec& spec,
                                ExperimentResult& res) {
    int d = int(pr.get_int("d", 2));
    double c = pr.get_double("c", 0.2);
    int k_lo = int(pr.get_int("k_lo", 6));
    int k_hi = int(pr.get_int("k_hi", 12));
    int refine = int(pr.get_int("grid_refine", 64));
    pr.finish();

    MultiplierErrorScan scan = multiplier_error_scan(d, k_lo, k_hi, c, refine);

    std::ostringstream csv, jsonl;
    csv << "k,sup_error,grid_points\n";
    Plot plot;
    plot.title = "Scale-k multiplier approximation error";
    plot.xlabel = "k";
    plot.ylabel = "sup over frequency grid";
    plot.logy = true;
    PlotSeries s;
    s.label = "sup error";
    for (const MultiplierErrorRow& r : scan.rows) {
        csv << r.k << ',' << fmt_double(r.sup_error) << ',' << r.grid_points
            << '\n';
        ojson j;
        j["k"] = r.k;
        j["sup_error"] = r.sup_error;
        j["grid_points"] = r.grid_points;
        jsonl << j.dump() << '\n';
        s.x.push_back(double(r.k));
        s.y.push_back(r.sup_error);
    }
    plot.series.push_back(std::move(s));
    write_artifact(spec, "multiplier-error-decay.csv", csv.str(), res);
    write_artifact(spec, "multiplier-error-decay.jsonl", jsonl.str(), res);
    write_artifact(spec, "multiplier-error-decay.svg", svg_of(plot), res);

    Asserter a{res};
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        a.require(scan.rows[i].sup_error < scan.rows[i - 1].sup_error,
                  "multiplier-error-decay: not strictly decreasing at k=" +
                      std::to_string(scan.rows[i].k) + " (" +
                      fmt_double(scan.rows[i - 1].sup_error) + " -> " +
                      fmt_double(scan.rows[i].sup_error) + ")");
    a.require(scan.fit.slope < -0.1,
              "multiplier-error-decay: log2 slope " + fmt_double(scan.fit.slope) +
                  " not below -0.1");

    ojson sum;
    sum["experiment"] = "multiplier-error-decay";
    sum["d"] = d;
    sum["c"] = c;
    sum["k_lo"] = k_lo;
    sum["k_hi"] = k_hi;
    sum["slope"] = scan.fit.slope;
    sum["pass"] = res.exit_code == 0;
    res.summary = sum.dump();
}

// ---- arithmetic-complexity --------------------------------------------

void run_arithmetic_complexity(ParamReader& pr, const ExperimentSpec& spec,
                               ExperimentResult& res) {
    int d = int(pr.get_int("d", 2));
    int k = int(pr.get_int("k", 9));
    int n_exp = int(pr.get_int("n_exp", 14));
    double c = pr.get_double("c", 0.2);
    std::vector<std::int64_t> q_list = pr.get_int_list("q_list", "1,3,5,7,11,13");
    pr.finish();

    ArithComplexityResult table = experiment_arithmetic_complexity(
        d, k, q_list, std::int64_t(1) << n_exp, c);

    std::ostringstream csv, jsonl;
    csv << "Q,measured,predicted,ratio\n";
    Plot plot;
    plot.title = "Progression-norm scaling, degree " + std::to_string(d) +
                 ", k=" + std::to_string(k);
    plot.xlabel = "Q";
    plot.ylabel = "measured / predicted";
    PlotSeries s;
    s.label = "ratio";
    s.line = false;
    for (const ArithComplexityRow& r : table.rows) {
        csv << r.Q << ',' << fmt_double(r.measured) << ','
            << fmt_double(r.predicted) << ',' << fmt_double(r.ratio) << '\n';
        ojson j;
        j["Q"] = r.Q;
        j["measured"] = r.measured;
        j["predicted"] = r.predicted;
        j["ratio"] = r.ratio;
        jsonl << j.dump() << '\n';
        s.x.push_back(double(r.Q));
        s.y.push_back(r.ratio);
    }
    plot.series.push_back(std::move(s));
    write_artifact(spec, "arithmetic-complexity.csv", csv.str(), res);
    write_artifact(spec, "arithmetic-complexity.jsonl", jsonl.str(), res);
    write_artifact(spec, "arithmetic-complexity.svg", svg_of(plot), res);

    Asserter a{res};
    for (const ArithComplexityRow& r : table.rows)
        a.require(r.ratio >= 0.25 && r.ratio <= 4.0,
                  "arithmetic-complexity: ratio outside [1/4,4]: Q=" +
                      std::to_string(r.Q) + " ratio=" + fmt_double(r.ratio));

    ojson sum;
    sum["experiment"] = "arithmetic-complexity";
    sum["d"] = d;
    sum["k"] = k;
    sum["N"] = table.N;
    sum["delta"] = table.delta;
    sum["rows"] = table.rows.size();
    sum["pass"] = res.exit_code == 0;
    res.summary = sum.dump();
}

// ---- lepingle ----------------------------------------------------------

void run_lepingle(ParamReader& pr, const ExperimentSpec& spec,
                  ExperimentResult& res) {
    std::string kind_name = pr.get_string("kind", "martingale");
    int trials = int(pr.get_int("trials", 200));
    int len = int(pr.get_int("len", 256));
    std::vector<double> r_list = pr.get_double_list("r_list", "2.1,2.5,4,10");
    pr.finish();

    ScaleFamilyKind kind;
    if (kind_name == "martingale") kind = ScaleFamilyKind::martingale;
    else if (kind_name == "convolution") kind = ScaleFamilyKind::convolution;
    else throw std::invalid_argument("lepingle: kind must be martingale|convolution");

    std::vector<double> rs = r_list;
    std::sort(rs.begin(), rs.end());

    std::ostringstream csv, jsonl;
    csv << "r,normalized_max_ratio,raw_max_ratio\n";
    Plot plot;
    plot.title = "Variation-norm ratios across r (" + kind_name + " family)";
    plot.xlabel = "r";
    plot.ylabel = "max ratio / (r/(r-2))";
    PlotSeries s;
    s.label = "normalized max ratio";
    std::vector<LepingleResult> results;
    std::vector<double> ratios;
    for (double r : rs) {
        LepingleResult lr = lepingle_check(kind, trials, len, r, spec.seed);
        ratios.push_back(lr.max_ratio);
        double raw = lr.max_ratio * r / (r - 2.0);
        csv << fmt_double(r) << ',' << fmt_double(lr.max_ratio) << ','
            << fmt_double(raw) << '\n';
        ojson j;
        j["r"] = r;
        j["normalized_max_ratio"] = lr.max_ratio;
        j["raw_max_ratio"] = raw;
        jsonl << j.dump() << '\n';
        s.x.push_back(r);
        s.y.push_back(lr.max_ratio);
        results.push_back(std::move(lr));
    }
    plot.series.push_back(std::move(s));
    write_artifact(spec, "lepingle.csv", csv.str(), res);
    write_artifact(spec, "lepingle.jsonl", jsonl.str(), res);
    write_artifact(spec, "lepingle.svg", svg_of(plot), res);

    Asserter a{res};
    for (std::size_t i = 0; i < ratios.size(); ++i)
        a.require(std::isfinite(ratios[i]) && ratios[i] >= 0,
                  "lepingle: degenerate ratio at r=" + fmt_double(rs[i]));
    // Same seed means identical signals per trial, so the raw variation
    // ratio must fall as r grows -- exact monotonicity, small float slack.
    for (std::size_t i = 1; i < rs.size(); ++i) {
        const std::vector<double>& lo = results[i - 1].trial_ratios;
        const std::vector<double>& hi = results[i].trial_ratios;
        double c_lo = rs[i - 1] / (rs[i - 1] - 2.0);
        double c_hi = rs[i] / (rs[i] - 2.0);
        for (std::size_t t = 0; t < lo.size() && t < hi.size(); ++t) {
            double raw_lo = lo[t] * c_lo, raw_hi = hi[t] * c_hi;
            a.require(raw_hi <= raw_lo * (1.0 + 1e-9) + 1e-12,
                      "lepingle: raw ratio not r-monotone at trial " +
                          std::to_string(t) + " (r=" + fmt_double(rs[i - 1]) +
                          " -> " + fmt_double(rs[i]) + ": " + fmt_double(raw_lo) +
                          " -> " + fmt_double(raw_hi) + ")");
        }
    }
    double rmin = *std::min_element(ratios.begin(), ratios.end());
    double rmax = *std::max_element(ratios.begin(), ratios.end());

    ojson sum;
    sum["experiment"] = "lepingle";
    sum["kind"] = kind_name;
    sum["trials"] = trials;
    sum["len"] = len;
    sum["ratio_min"] = rmin;
    sum["ratio_max"] = rmax;
    sum["pass"] = res.exit_code == 0;
    res.summary = sum.dump();
}

// ---- rademacher-menshov ------------------------------------------------

void run_rademacher_menshov(ParamReader& pr, const ExperimentSpec& spec,
                            ExperimentResult& res) {
    std::vector<std::int64_t> sizes_raw =
        pr.get_int_list("sizes", "4,8,16,32,64,128,256");
    int trials = int(pr.get_int("trials", 30));
    int len = int(pr.get_int("len", 512));
    pr.finish();
    std::vector<std::size_t> sizes(sizes_raw.begin(), sizes_raw.end());

    std::vector<RademacherMenshovRow> rows =
        rademacher_menshov_scan(sizes, trials, len, spec.seed);

    std::ostringstream csv, jsonl;
    csv << "family_size,max_ratio,normalized\n";
    Plot plot;
    plot.title = "Chained-maximum growth against log^2 of family size";
    plot.xlabel = "family size";
    plot.ylabel = "max ratio and its log^2-normalized form";
    plot.logx = true;
    PlotSeries s1, s2;
    s1.label = "max ratio";
    s2.label = "ratio / (1+log2^2)";
    for (const RademacherMenshovRow& r : rows) {
        csv << r.family_size << ',' << fmt_double(r.max_ratio) << ','
            << fmt_double(r.normalized) << '\n';
        ojson j;
        j["family_size"] = r.family_size;
        j["max_ratio"] = r.max_ratio;
        j["normalized"] = r.normalized;
        jsonl << j.dump() << '\n';
        s1.x.push_back(double(r.family_size));
        s1.y.push_back(r.max_ratio);
        s2.x.push_back(double(r.family_size));
        s2.y.push_back(r.normalized);
    }
    plot.series.push_back(std::move(s1));
    plot.series.push_back(std::move(s2));
    write_artifact(spec, "rademacher-menshov.csv", csv.str(), res);
    write_artifact(spec, "rademacher-menshov.jsonl", jsonl.str(), res);
    write_artifact(spec, "rademacher-menshov.svg", svg_of(plot), res);

    Asserter a{res};
    double base = rows.front().normalized;
    for (const RademacherMenshovRow& r : rows)
        a.require(r.normalized <= 2.0 * base,
                  "rademacher-menshov: normalized ratio " +
                      fmt_double(r.normalized) + " at size " +
                      std::to_string(r.family_size) + " exceeds 2x baseline " +
                      fmt_double(base));

    ojson sum;
    sum["experiment"] = "rademacher-menshov";
    sum["trials"] = trials;
    sum["len"] = len;
    sum["rows"] = rows.size();
    sum["pass"] = res.exit_code == 0;
    res.summary = sum.dump();
}

// ---- multifreq-log2n ---------------------------------------------------

void run_multifreq_log2n(ParamReader& pr, const ExperimentSpec& spec,
                         ExperimentResult& res) {
    std::vector<std::int64_t> n_raw = pr.get_int_list("n_list", "2,4,8,16,32");
    int trials = int(pr.get_int("trials", 50));
    int m_exp = int(pr.get_int("m_exp", 16));
    int unit_exp = int(pr.get_int("unit_exp", 10));
    pr.finish();
    std::vector<std::size_t> n_list(n_raw.begin(), n_raw.end());

    Log2NResult table =
        log2n_experiment(n_list, trials, std::size_t(1) << m_exp,
                         std::int64_t(1) << unit_exp, spec.seed);

    std::ostringstream csv, jsonl;
    csv << "N,max_ratio,normalized,scales\n";
    Plot plot;
    plot.title = "Multi-frequency maximal ratio against 1+log2^2(N)";
    plot.xlabel = "frequency count N";
    plot.ylabel = "worst L2 ratio and its normalized form";
    plot.logx = true;
    PlotSeries s1, s2;
    s1.label = "max ratio";
    s2.label = "ratio / (1+log2^2 N)";
    for (const Log2NRow& r : table.rows) {
        std::string scale_text;
        for (std::size_t i = 0; i < r.scales.size(); ++i) {
            if (i) scale_text += ' ';
            scale_text += std::to_string(r.scales[i]);
        }
        csv << r.n_freqs << ',' << fmt_double(r.max_ratio) << ','
            << fmt_double(r.normalized) << ',' << csv_field(scale_text) << '\n';
        ojson j;
        j["N"] = r.n_freqs;
        j["ratio_max"] = r.max_ratio;
        j["ratio_over_log2N"] = r.normalized;
        j["scales"] = r.scales;
        jsonl << j.dump() << '\n';
        s1.x.push_back(double(r.n_freqs));
        s1.y.push_back(r.max_ratio);
        s2.x.push_back(double(r.n_freqs));
        s2.y.push_back(r.normalized);
    }
    plot.series.push_back(std::move(s1));
    plot.series.push_back(std::move(s2));
    write_artifact(spec, "multifreq-log2n.csv", csv.str(), res);
    write_artifact(spec, "multifreq-log2n.jsonl", jsonl.str(), res);
    write_artifact(spec, "multifreq-log2n.svg", svg_of(plot), res);

    Asserter a{res};
    double base = table.rows.front().normalized;
    a.require(base > 0, "multifreq-log2n: degenerate baseline ratio");
    for (const Log2NRow& r : table.rows)
        a.require(r.normalized <= 2.0 * base,
                  "multifreq-log2n: normalized ratio " + fmt_double(r.normalized) +
                      " at N=" + std::to_string(r.n_freqs) +
                      " exceeds 2x the smallest-N value " + fmt_double(base) +
                      " (super-log^2 growth)");

    ojson sum;
    sum["experiment"] = "multifreq-log2n";
    sum["trials"] = trials;
    sum["M"] = std::int64_t(1) << m_exp;
    sum["unit"] = std::int64_t(1) << unit_exp;
    sum["rows"] = table.rows.size();
    sum["pass"] = res.exit_code == 0;
    res.summary = sum.dump();
}

// ---- vk-decay ----------------------------------------------------------

void run_vk_decay(ParamReader& pr, const ExperimentSpec& spec,
                  ExperimentResult& res) {
    int d = int(pr.get_int("d", 2));
    int k = int(pr.get_int("k", 4));
    std::vector<double> u_list = pr.get_double_list("u_list", "10,100,1000");
    std::vector<double> u_small = pr.get_double_list("u_small", "0.001,0.0001");
    double c_decay = pr.get_double("c_decay", 1.0);
    double c_lin = pr.get_double("c_lin", 2.5);
    pr.finish();

    double scale = std::exp2(double(d) * double(k));

    std::ostringstream csv, jsonl;
    csv << "u,abs_v,decay_product,lin_defect\n";
    Plot plot;
    plot.title = "Oscillatory amplitude decay, degree " + std::to_string(d);
    plot.xlabel = "scaled frequency u";
    plot.ylabel = "|V| * u^(1/d)";
    plot.logx = true;
    PlotSeries s;
    s.label = "decay product";

    Asserter a{res};
    for (double u : u_list) {
        cplx v = evaluate_vk(d, k, u / scale);
        double prod = std::abs(v) * std::pow(u, 1.0 / double(d));
        csv << fmt_double(u) << ',' << fmt_double(std::abs(v)) << ','
            << fmt_double(prod) << ",\n";
        ojson j;
        j["u"] = u;
        j["abs_v"] = std::abs(v);
        j["decay_product"] = prod;
        jsonl << j.dump() << '\n';
        s.x.push_back(u);
        s.y.push_back(prod);
        a.require(prod <= c_decay, "vk-decay: |V| * u^(1/d) = " + fmt_double(prod) +
                                       " exceeds " + fmt_double(c_decay) +
                                       " at u=" + fmt_double(u));
    }
    for (double u : u_small) {
        cplx v = evaluate_vk(d, k, u / scale);
        double defect = std::abs(v - 1.0);
        csv << fmt_double(u) << ',' << fmt_double(std::abs(v)) << ",,"
            << fmt_double(defect) << '\n';
        ojson j;
        j["u"] = u;
        j["abs_v"] = std::abs(v);
        j["lin_defect"] = defect;
        jsonl << j.dump() << '\n';
        a.require(defect <= c_lin * u,
                  "vk-decay: |V-1| = " + fmt_double(defect) + " exceeds " +
                      fmt_double(c_lin) + "*u at u=" + fmt_double(u));
    }
    plot.series.push_back(std::move(s));
    write_artifact(spec, "vk-decay.csv", csv.str(), res);
    write_artifact(spec, "vk-decay.jsonl", jsonl.str(), res);
    write_artifact(spec, "vk-decay.svg", svg_of(plot), res);

    ojson sum;
    sum["experiment"] = "vk-decay";
    sum["d"] = d;
    sum["k"] = k;
    sum["c_decay"] = c_decay;
    sum["c_lin"] = c_lin;
    sum["pass"] = res.exit_code == 0;
    res.summary = sum.dump();
}

using Runner = std::function<void(ParamReader&, const ExperimentSpec&,
                                  ExperimentResult&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
    static const std::vector<std::pair<std::string, Runner>> reg = {
        {"hua-scan", run_hua_scan},
        {"minor-arc-decay", run_minor_arc_decay},
        {"multiplier-error-decay", run_multiplier_error_decay},
        {"arithmetic-complexity", run_arithmetic_complexity},
        {"lepingle", run_lepingle},
        {"rademacher-menshov", run_rademacher_menshov},
        {"multifreq-log2n", run_multifreq_log2n},
        {"vk-decay", run_vk_decay},
    };
    return reg;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : registry()) out.push_back(e.first);
        return out;
    }();
    return names;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult res;
    const Runner* runner = nullptr;
    for (const auto& e : registry())
        if (e.first == spec.name) runner = &e.second;
    if (!runner) {
        res.exit_code = 2;
        std::string known;
        for (const auto& n : experiment_names()) {
            if (!known.empty()) known += ", ";
            known += n;
        }
        res.failure = "unknown experiment '" + spec.name + "' (known: " + known + ")";
        return res;
    }
    try {
        ParamReader pr(spec.params);
        (*runner)(pr, spec, res);
    } catch (const std::exception& e) {
        res.exit_code = 2;
        res.failure = e.what();
    }
    return res;
}

}  // namespace weyl
