#include "weyl/io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "weyl/util.hpp"

namespace weyl {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw std::invalid_argument("csv: unterminated quoted field");
    fields.push_back(cur);
    return fields;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != trim(s).size() && pos != s.size())
            throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
    }
}

std::int64_t parse_int(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": bad integer '" + s + "'");
    }
}

}  // namespace

void write_signal_csv(std::ostream& os, const GridSignal& f) {
    os << "index,re,im\n";
    for (std::size_t i = 0; i < f.values.size(); ++i)
        os << (f.offset + std::int64_t(i)) << ',' << fmt_double(f.values[i].real())
           << ',' << fmt_double(f.values[i].imag()) << '\n';
}

void write_signal_csv(std::ostream& os, const CyclicSignal& f) {
    os << "# modulus " << f.modulus() << '\n';
    os << "index,re,im\n";
    for (std::size_t i = 0; i < f.values.size(); ++i)
        os << i << ',' << fmt_double(f.values[i].real()) << ','
           << fmt_double(f.values[i].imag()) << '\n';
}

ParsedSignal read_signal_csv(std::istream& is) {
    ParsedSignal out;
    std::string line;
    std::int64_t modulus = -1;
    bool header_seen = false;
    std::vector<std::pair<std::int64_t, cplx>> rows;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            std::istringstream meta(t.substr(1));
            std::string key;
            meta >> key;
            if (key == "modulus") {
                if (!(meta >> modulus) || modulus < 1)
                    throw std::invalid_argument("signal csv: bad modulus line");
            }
            continue;
        }
        if (!header_seen) {
            if (t != "index,re,im")
                throw std::invalid_argument("signal csv: expected header index,re,im");
            header_seen = true;
            continue;
        }
        std::vector<std::string> f = split_csv_line(t);
        if (f.size() != 3)
            throw std::invalid_argument("signal csv: expected 3 fields per row");
        rows.emplace_back(parse_int(f[0], "signal csv"),
                          cplx{parse_double(f[1], "signal csv"),
                               parse_double(f[2], "signal csv")});
    }
    if (!header_seen) throw std::invalid_argument("signal csv: empty input");
    if (rows.empty()) throw std::invalid_argument("signal csv: no data rows");
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first != rows[i - 1].first + 1)
            throw std::invalid_argument("signal csv: indices must be consecutive");
    if (modulus >= 1) {
        if (rows.front().first != 0 || std::int64_t(rows.size()) != modulus)
            throw std::invalid_argument(
                "signal csv: cyclic rows must cover 0..modulus-1");
        out.cyclic = true;
        out.cyc = CyclicSignal(std::size_t(modulus));
        for (std::size_t i = 0; i < rows.size(); ++i)
            out.cyc.values[i] = rows[i].second;
    } else {
        out.grid.offset = rows.front().first;
        out.grid.values.reserve(rows.size());
        for (auto& r : rows) out.grid.values.push_back(r.second);
    }
    return out;
}

void write_path_csv(std::ostream& os, const SampledPath& p) {
    p.validate();
    os << 't';
    for (std::size_t j = 1; j <= p.dim; ++j) os << ",v" << j;
    os << '\n';
    for (std::size_t i = 0; i < p.length(); ++i) {
        os << fmt_double(p.times[i]);
        const double* v = p.sample(i);
        for (std::size_t j = 0; j < p.dim; ++j) os << ',' << fmt_double(v[j]);
        os << '\n';
    }
}

SampledPath read_path_csv(std::istream& is) {
    std::string line;
    bool header_seen = false;
    SampledPath p;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> f = split_csv_line(t);
        if (!header_seen) {
            if (f.size() < 2 || f[0] != "t")
                throw std::invalid_argument("path csv: expected header t,v1[,v2,...]");
            for (std::size_t j = 1; j < f.size(); ++j)
                if (f[j] != "v" + std::to_string(j))
                    throw std::invalid_argument("path csv: bad header column '" +
                                                f[j] + "'");
            p.dim = f.size() - 1;
            header_seen = true;
            continue;
        }
        if (f.size() != p.dim + 1)
            throw std::invalid_argument("path csv: row width does not match header");
        p.times.push_back(parse_double(f[0], "path csv"));
        for (std::size_t j = 0; j < p.dim; ++j)
            p.values.push_back(parse_double(f[j + 1], "path csv"));
    }
    if (!header_seen) throw std::invalid_argument("path csv: empty input");
    p.validate();
    return p;
}

std::map<std::string, std::string> parse_config(std::istream& is) {
    std::map<std::string, std::string> cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key");
        if (!cfg.emplace(key, val).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");
    }
    return cfg;
}

void reject_unknown_keys(const std::map<std::string, std::string>& cfg,
                         const std::vector<std::string>& allowed) {
    std::string bad;
    for (const auto& kv : cfg) {
        if (std::find(allowed.begin(), allowed.end(), kv.first) == allowed.end()) {
            if (!bad.empty()) bad += ", ";
            bad += kv.first;
        }
    }
    if (!bad.empty())
        throw std::invalid_argument("config: unknown parameter keys: " + bad);
}

namespace {

constexpr double view_w = 800, view_h = 600;
constexpr double margin_l = 70, margin_r = 25, margin_t = 45, margin_b = 55;

const char* series_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return palette[i % 8];
}

std::string fmt2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_svg_plot(std::ostream& os, const Plot& p) {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool have = false;
    for (const PlotSeries& s : p.series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("svg plot: series x/y lengths differ");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double x = s.x[i], y = s.y[i];
            if (!std::isfinite(x) || !std::isfinite(y))
                throw std::invalid_argument("svg plot: non-finite data point");
            if (p.logx && x <= 0)
                throw std::invalid_argument("svg plot: log x-axis needs positive data");
            if (p.logy && y <= 0)
                throw std::invalid_argument("svg plot: log y-axis needs positive data");
            if (p.logx) x = std::log10(x);
            if (p.logy) y = std::log10(y);
            if (!have) {
                xmin = xmax = x;
                ymin = ymax = y;
                have = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (!have) {
        xmin = ymin = 0;
        xmax = ymax = 1;
    }
    if (xmax - xmin < 1e-12) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    double px0 = margin_l, px1 = view_w - margin_r;
    double py0 = view_h - margin_b, py1 = margin_t;  // y grows downward in SVG
    auto sx = [&](double x) {
        if (p.logx) x = std::log10(x);
        return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0);
    };
    auto sy = [&](double y) {
        if (p.logy) y = std::log10(y);
        return py0 + (y - ymin) / (ymax - ymin) * (py1 - py0);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
          "width=\"800\" height=\"600\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    os << "<rect x=\"" << fmt2(px0) << "\" y=\"" << fmt2(py1) << "\" width=\""
       << fmt2(px1 - px0) << "\" height=\"" << fmt2(py0 - py1)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
          "font-family=\"sans-serif\">"
       << xml_escape(p.title) << "</text>\n";
    os << "<text x=\"" << fmt2((px0 + px1) / 2)
       << "\" y=\"590\" text-anchor=\"middle\" font-size=\"13\" "
          "font-family=\"sans-serif\">"
       << xml_escape(p.xlabel) << "</text>\n";
    os << "<text x=\"16\" y=\"" << fmt2((py0 + py1) / 2)
       << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
          "transform=\"rotate(-90 16 "
       << fmt2((py0 + py1) / 2) << ")\">" << xml_escape(p.ylabel) << "</text>\n";

    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        double fx = xmin + (xmax - xmin) * double(i) / ticks;
        double fy = ymin + (ymax - ymin) * double(i) / ticks;
        double tx = px0 + (px1 - px0) * double(i) / ticks;
        double ty = py0 + (py1 - py0) * double(i) / ticks;
        double label_x = p.logx ? std::pow(10.0, fx) : fx;
        double label_y = p.logy ? std::pow(10.0, fy) : fy;
        os << "<line x1=\"" << fmt2(tx) << "\" y1=\"" << fmt2(py0) << "\" x2=\""
           << fmt2(tx) << "\" y2=\"" << fmt2(py0 + 5)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt2(tx) << "\" y=\"" << fmt2(py0 + 20)
           << "\" text-anchor=\"middle\" font-size=\"11\" "
              "font-family=\"sans-serif\">"
           << fmt_tick(label_x) << "</text>\n";
        os << "<line x1=\"" << fmt2(px0 - 5) << "\" y1=\"" << fmt2(ty)
           << "\" x2=\"" << fmt2(px0) << "\" y2=\"" << fmt2(ty)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fmt2(px0 - 8) << "\" y=\"" << fmt2(ty + 4)
           << "\" text-anchor=\"end\" font-size=\"11\" "
              "font-family=\"sans-serif\">"
           << fmt_tick(label_y) << "</text>\n";
    }

    for (std::size_t si = 0; si < p.series.size(); ++si) {
        const PlotSeries& s = p.series[si];
        const char* color = series_color(si);
        if (s.line && s.x.size() >= 2) {
            os << "<polyline fill=\"none\" stroke=\"" << color
               << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) os << ' ';
                os << fmt2(sx(s.x[i])) << ',' << fmt2(sy(s.y[i]));
            }
            os << "\"/>\n";
        }
        if (!s.line) {
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << "<circle cx=\"" << fmt2(sx(s.x[i])) << "\" cy=\""
                   << fmt2(sy(s.y[i])) << "\" r=\"3\" fill=\"" << color
                   << "\"/>\n";
        }
        os << "<text x=\"" << fmt2(px1 - 10) << "\" y=\""
           << fmt2(py1 + 18 + 16 * double(si))
           << "\" text-anchor=\"end\" font-size=\"12\" "
              "font-family=\"sans-serif\" fill=\""
           << color << "\">" << xml_escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace weyl
