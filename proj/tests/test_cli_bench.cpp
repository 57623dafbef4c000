// Tests for the progression test-signal generator, the averaging-norm sweep
// over sparse progressions, the CSV/config/SVG serialization layer, and the
// experiment registry (exit codes, artifacts, determinism).
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "weyl/ap_test.hpp"
#include "weyl/cutoff.hpp"
#include "weyl/experiments.hpp"
#include "weyl/io.hpp"
#include "weyl/signal.hpp"

using namespace weyl;
namespace fs = std::filesystem;

namespace {

// Runs fn expecting std::invalid_argument; returns the message ("" = no throw).
template <typename Fn>
std::string message_of_invalid(Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(bool(is));
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("progression test signal: atoms on multiples of Q weighted by the bump") {
    SmoothCutoff phi = make_cutoff(SmoothCutoff::Kind::phi);
    GridSignal f = gen_ap_test(2, 8, phi);
    // Bump support is (N/2, 4N) = (4, 32); live atoms are 6, 8, ..., 30.
    CHECK(f.lo() == 6);
    CHECK(f.hi() == 31);  // exclusive end
    CHECK(f.at(6).real() == doctest::Approx(phi_profile(0.75)).epsilon(1e-15));
    CHECK(phi_profile(0.75) > 0.0);
    CHECK(f.at(5) == cplx{0, 0});
    CHECK(f.at(7) == cplx{0, 0});
    for (std::int64_t x = f.lo(); x < f.hi(); ++x) {
        if (x % 2 != 0) CHECK(f.at(x) == cplx{0, 0});
        CHECK(f.at(x).imag() == 0.0);
    }
}

TEST_CASE("progression test signal: dense case and mass scaling") {
    SmoothCutoff phi = make_cutoff(SmoothCutoff::Kind::phi);
    GridSignal dense = gen_ap_test(1, 100, phi);
    CHECK(dense.lo() >= 51);   // profile vanishes up to N/2
    CHECK(dense.hi() <= 400);  // exclusive end; support stops before 4N
    CHECK(l2_norm(dense) > 0.0);

    // ~N/Q live atoms of size <= 1: l2 norm is on the order of sqrt(N/Q).
    GridSignal f = gen_ap_test(5, 1000, phi);
    double scale = std::sqrt(1000.0 / 5.0);
    CHECK(l2_norm(f) > 0.5 * scale);
    CHECK(l2_norm(f) < 2.0 * scale);
}

TEST_CASE("progression test signal: parameter validation") {
    SmoothCutoff phi = make_cutoff(SmoothCutoff::Kind::phi);
    CHECK_THROWS_AS(gen_ap_test(4, 100, phi), std::invalid_argument);   // not prime
    CHECK_THROWS_AS(gen_ap_test(0, 100, phi), std::invalid_argument);
    CHECK_THROWS_AS(gen_ap_test(2, 0, phi), std::invalid_argument);
    std::string msg =
        message_of_invalid([&] { gen_ap_test(131, std::int64_t(1) << 14, phi); });
    CHECK(msg.find("Q <= sqrt(N)") != std::string::npos);
    // Q = 127 keeps Q^2 = 16129 <= 16384 and is accepted.
    CHECK_NOTHROW(gen_ap_test(127, std::int64_t(1) << 14, phi));
}

TEST_CASE("progression test signal: alternative profiles place their windows") {
    SmoothCutoff mu = make_cutoff(SmoothCutoff::Kind::mu_weight, 64, 2);
    GridSignal f = gen_ap_test(3, 81, mu);
    CHECK(f.lo() >= 0);
    CHECK(f.hi() <= 82);  // exclusive end; last atom is 27 * 3
    CHECK(l2_norm(f) > 0.0);
    for (std::int64_t x = f.lo(); x < f.hi(); ++x)
        if (x % 3 != 0) CHECK(f.at(x) == cplx{0, 0});
}

TEST_CASE("averaging-norm sweep refuses out-of-regime parameters") {
    // log2(N)/k - (d-1) must land in (0, 1].
    CHECK_THROWS_AS(
        experiment_arithmetic_complexity(2, 9, {1}, std::int64_t(1) << 9, 0.2),
        std::invalid_argument);  // exponent 0
    CHECK_THROWS_AS(
        experiment_arithmetic_complexity(2, 4, {1}, std::int64_t(1) << 14, 0.2),
        std::invalid_argument);  // exponent 2.5
    CHECK_THROWS_AS(experiment_arithmetic_complexity(1, 5, {1}, 256, 0.2),
                    std::invalid_argument);
    CHECK_THROWS_AS(experiment_arithmetic_complexity(2, 5, {}, 256, 0.2),
                    std::invalid_argument);
}

TEST_CASE("averaging-norm sweep: predicted column and bookkeeping") {
    ArithComplexityResult res =
        experiment_arithmetic_complexity(2, 5, {1, 3, 5}, 256, 0.2);
    CHECK(res.d == 2);
    CHECK(res.k == 5);
    CHECK(res.N == 256);
    CHECK(res.delta == doctest::Approx(0.6).epsilon(1e-12));
    REQUIRE(res.rows.size() == 3);
    std::vector<std::int64_t> qs = {1, 3, 5};
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const ArithComplexityRow& row = res.rows[i];
        CHECK(row.Q == qs[i]);
        // d = 2, N = 2^8, k = 5: predicted = Q^{-1/2} * sqrt(2^8 / 2^10).
        CHECK(row.predicted ==
              doctest::Approx(std::pow(double(row.Q), -0.5) * 0.5).epsilon(1e-12));
        CHECK(row.measured > 0.0);
        CHECK(row.ratio ==
              doctest::Approx(row.measured / row.predicted).epsilon(1e-12));
    }
}

TEST_CASE("csv field encoding quotes exactly when needed") {
    CHECK(csv_field("abc") == "abc");
    CHECK(csv_field("") == "");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("a\"b") == "\"a\"\"b\"");
    CHECK(csv_field("a\nb") == "\"a\nb\"");
}

TEST_CASE("csv line splitting honors quoting") {
    CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line(",,") == std::vector<std::string>{"", "", ""});
    CHECK(split_csv_line("\"a,b\",c") == std::vector<std::string>{"a,b", "c"});
    CHECK(split_csv_line("\"a\"\"b\"") == std::vector<std::string>{"a\"b"});
    // Carriage returns survive inside quotes and are stripped outside them.
    CHECK(split_csv_line("\"a\rb\",c\r") ==
          std::vector<std::string>{"a\rb", "c"});
    CHECK_THROWS_AS(split_csv_line("\"abc"), std::invalid_argument);
    // Round trip through the encoder.
    std::vector<std::string> fields = {"plain", "with,comma", "with\"quote", ""};
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv_field(fields[i]);
    }
    CHECK(split_csv_line(line) == fields);
}

TEST_CASE("grid signal csv round trip") {
    GridSignal f;
    f.offset = -3;
    f.values = {{1.25, -2.5}, {0, 0}, {1.0 / 3.0, 7e-11}, {-4, 0.125}};
    std::ostringstream os;
    write_signal_csv(os, f);
    std::istringstream is(os.str());
    ParsedSignal back = read_signal_csv(is);
    CHECK_FALSE(back.cyclic);
    REQUIRE(back.grid.values.size() == f.values.size());
    CHECK(back.grid.offset == f.offset);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        CHECK(back.grid.values[i].real() ==
              doctest::Approx(f.values[i].real()).epsilon(1e-9));
        CHECK(back.grid.values[i].imag() ==
              doctest::Approx(f.values[i].imag()).epsilon(1e-9));
    }
}

TEST_CASE("cyclic signal csv round trip keeps the modulus") {
    CyclicSignal f(5);
    for (std::size_t i = 0; i < 5; ++i)
        f.values[i] = cplx{double(i) * 0.3, -double(i)};
    std::ostringstream os;
    write_signal_csv(os, f);
    CHECK(os.str().rfind("# modulus 5", 0) == 0);
    std::istringstream is(os.str());
    ParsedSignal back = read_signal_csv(is);
    REQUIRE(back.cyclic);
    REQUIRE(back.cyc.modulus() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(back.cyc.values[i].real() ==
              doctest::Approx(f.values[i].real()).epsilon(1e-9));
        CHECK(back.cyc.values[i].imag() ==
              doctest::Approx(f.values[i].imag()).epsilon(1e-9));
    }
}

TEST_CASE("signal csv rejects malformed input") {
    auto parse = [](const std::string& text) {
        std::istringstream is(text);
        return read_signal_csv(is);
    };
    CHECK_THROWS_AS(parse(""), std::invalid_argument);
    CHECK_THROWS_AS(parse("index,re,im\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("wrong,header\n0,1,0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("index,re,im\n0,1,0\n2,1,0\n"),
                    std::invalid_argument);  // gap in indices
    CHECK_THROWS_AS(parse("index,re,im\n0,huh,0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("# modulus 3\nindex,re,im\n0,1,0\n1,1,0\n"),
                    std::invalid_argument);  // cyclic rows must cover 0..M-1
}

TEST_CASE("path csv round trip") {
    SampledPath p;
    p.dim = 2;
    p.times = {0.0, 0.5, 2.0};
    p.values = {1, -1, 0.25, 3, 1.0 / 7.0, 0};
    std::ostringstream os;
    write_path_csv(os, p);
    std::istringstream is(os.str());
    SampledPath back = read_path_csv(is);
    CHECK(back.dim == 2);
    REQUIRE(back.times.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(back.times[i] == doctest::Approx(p.times[i]).epsilon(1e-12));
    REQUIRE(back.values.size() == 6);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(back.values[i] == doctest::Approx(p.values[i]).epsilon(1e-9));

    auto parse = [](const std::string& text) {
        std::istringstream is2(text);
        return read_path_csv(is2);
    };
    CHECK_THROWS_AS(parse(""), std::invalid_argument);
    CHECK_THROWS_AS(parse("t,v1\n0,1\n0,2\n"),
                    std::invalid_argument);  // times must strictly increase
    CHECK_THROWS_AS(parse("t,vv\n0,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("t,v1\n0,1,2\n"), std::invalid_argument);
}

TEST_CASE("flat config parsing") {
    std::istringstream is(
        "# leading comment\n"
        "\n"
        "a=1\n"
        "  b = two words \n"
        "c=\n");
    std::map<std::string, std::string> cfg = parse_config(is);
    REQUIRE(cfg.size() == 3);
    CHECK(cfg["a"] == "1");
    CHECK(cfg["b"] == "two words");
    CHECK(cfg["c"] == "");

    auto parse = [](const std::string& text) {
        std::istringstream is2(text);
        return parse_config(is2);
    };
    CHECK_THROWS_AS(parse("a=1\na=2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("just a line\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("=value\n"), std::invalid_argument);

    CHECK_NOTHROW(reject_unknown_keys(cfg, {"a", "b", "c", "d"}));
    std::string msg =
        message_of_invalid([&] { reject_unknown_keys(cfg, {"a", "c"}); });
    CHECK(msg.find("b") != std::string::npos);
}

TEST_CASE("svg plot emitter produces the declared primitives") {
    Plot p;
    p.title = "norm <growth>";
    p.xlabel = "x";
    p.ylabel = "y";
    PlotSeries line;
    line.label = "trend";
    line.x = {1, 2, 3};
    line.y = {1, 4, 9};
    PlotSeries dots;
    dots.label = "samples";
    dots.line = false;
    dots.x = {1.5, 2.5};
    dots.y = {2, 6};
    p.series = {line, dots};

    std::ostringstream os;
    write_svg_plot(os, p);
    std::string svg = os.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("norm &lt;growth&gt;") != std::string::npos);
    CHECK(svg.find("trend") != std::string::npos);

    // Same input, same bytes.
    std::ostringstream os2;
    write_svg_plot(os2, p);
    CHECK(os2.str() == svg);

    Plot bad = p;
    bad.logy = true;
    bad.series[0].y = {0.0, 4, 9};
    std::ostringstream os3;
    CHECK_THROWS_AS(write_svg_plot(os3, bad), std::invalid_argument);

    Plot mismatch = p;
    mismatch.series[0].y = {1, 4};
    std::ostringstream os4;
    CHECK_THROWS_AS(write_svg_plot(os4, mismatch), std::invalid_argument);
}

TEST_CASE("experiment registry lists every runner") {
    const std::vector<std::string>& names = experiment_names();
    REQUIRE(names.size() == 8);
    for (const char* expected :
         {"hua-scan", "minor-arc-decay", "multiplier-error-decay",
          "arithmetic-complexity", "lepingle", "rademacher-menshov",
          "multifreq-log2n", "vk-decay"}) {
        bool found = false;
        for (const std::string& n : names) found = found || n == expected;
        CHECK_MESSAGE(found, expected);
    }
}

TEST_CASE("experiment runner: unknown name is a usage error naming the options") {
    ExperimentSpec spec;
    spec.name = "no-such-thing";
    ExperimentResult res = run_experiment(spec);
    CHECK(res.exit_code == 2);
    CHECK(res.failure.find("unknown experiment") != std::string::npos);
    CHECK(res.failure.find("hua-scan") != std::string::npos);
    CHECK(res.artifacts.empty());
}

TEST_CASE("experiment runner: unknown parameter key is a usage error") {
    ExperimentSpec spec;
    spec.name = "vk-decay";
    spec.params["zzz"] = "1";
    ExperimentResult res = run_experiment(spec);
    CHECK(res.exit_code == 2);
    CHECK(res.failure.find("zzz") != std::string::npos);
}

TEST_CASE("experiment runner: malformed list parameter is a usage error") {
    ExperimentSpec spec;
    spec.name = "vk-decay";
    spec.params["u_list"] = "10,abc";
    ExperimentResult res = run_experiment(spec);
    CHECK(res.exit_code == 2);
    CHECK(res.failure.find("u_list") != std::string::npos);
}

TEST_CASE("experiment runner: oscillatory-decay check passes at defaults") {
    ExperimentSpec spec;
    spec.name = "vk-decay";
    ExperimentResult res = run_experiment(spec);
    CHECK(res.exit_code == 0);
    CHECK(res.failure.empty());
    CHECK(res.artifacts.empty());  // no out_dir: nothing written
    CHECK(res.summary.find("\"pass\":true") != std::string::npos);
}

TEST_CASE("experiment runner: small martingale-variation run passes") {
    ExperimentSpec spec;
    spec.name = "lepingle";
    spec.params["trials"] = "5";
    spec.params["len"] = "64";
    spec.params["r_list"] = "2.1,10";
    ExperimentResult res = run_experiment(spec);
    CHECK(res.exit_code == 0);
    CHECK(res.failure.empty());
}

TEST_CASE("experiment runner: small multi-frequency run passes") {
    ExperimentSpec spec;
    spec.name = "multifreq-log2n";
    spec.params["n_list"] = "2,4";
    spec.params["trials"] = "2";
    spec.params["m_exp"] = "11";
    spec.params["unit_exp"] = "7";
    ExperimentResult res = run_experiment(spec);
    CHECK(res.exit_code == 0);
    CHECK(res.failure.empty());
}

TEST_CASE("experiment runner: artifacts are deterministic byte for byte") {
    fs::path d1 = fresh_dir("weyl_det_a");
    fs::path d2 = fresh_dir("weyl_det_b");
    auto run_into = [](const fs::path& dir) {
        ExperimentSpec spec;
        spec.name = "hua-scan";
        spec.params["q_max"] = "50";
        spec.out_dir = dir.string();
        return run_experiment(spec);
    };
    ExperimentResult r1 = run_into(d1);
    ExperimentResult r2 = run_into(d2);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == r1.exit_code);
    CHECK(r1.summary == r2.summary);
    REQUIRE_FALSE(r1.artifacts.empty());
    REQUIRE(r1.artifacts.size() == r2.artifacts.size());
    for (std::size_t i = 0; i < r1.artifacts.size(); ++i) {
        fs::path a = r1.artifacts[i], b = r2.artifacts[i];
        CHECK(a.filename() == b.filename());
        CHECK(slurp(a) == slurp(b));
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
}
