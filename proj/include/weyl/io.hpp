#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "weyl/paths.hpp"
#include "weyl/signal.hpp"

namespace weyl {

// RFC-4180 field encoding: quote when the field holds a comma, quote, or
// line break; embedded quotes are doubled.
std::string csv_field(const std::string& s);
// Split one CSV record honoring quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

// Signals serialize as `index,re,im` rows over the stored window; the
// cyclic form adds a `# modulus M` metadata line before the header.
void write_signal_csv(std::ostream& os, const GridSignal& f);
void write_signal_csv(std::ostream& os, const CyclicSignal& f);

struct ParsedSignal {
    bool cyclic = false;
    GridSignal grid;   // populated when !cyclic
    CyclicSignal cyc;  // populated when cyclic
};
ParsedSignal read_signal_csv(std::istream& is);

// Paths serialize as `t,v1[,v2,...]` with one row per sample time.
void write_path_csv(std::ostream& os, const SampledPath& p);
SampledPath read_path_csv(std::istream& is);

// Flat key=value configuration: one pair per line, leading '#' comments and
// blank lines skipped, duplicate keys rejected.
std::map<std::string, std::string> parse_config(std::istream& is);
// Throws naming the offending keys when cfg holds anything outside allowed.
void reject_unknown_keys(const std::map<std::string, std::string>& cfg,
                         const std::vector<std::string>& allowed);

// Minimal deterministic plot emitter: fixed 800x600 viewBox, line and
// scatter primitives, optional log10 axes.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool line = true;  // polyline when true, circle markers when false
};

struct Plot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    std::vector<PlotSeries> series;
};

void write_svg_plot(std::ostream& os, const Plot& p);

}  // namespace weyl
