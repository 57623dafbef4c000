#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace weyl {

// A fully specified experiment run: registered name, flat parameter map
// (defaults fill anything omitted; unknown keys are rejected), RNG seed,
// and an output directory ("" = compute and assert, write nothing).
struct ExperimentSpec {
    std::string name;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 1;
    std::string out_dir;
};

struct ExperimentResult {
    int exit_code = 0;  // 0 = pass, 1 = assertion failure, 2 = usage error
    std::string failure;                 // failing row / diagnostic, if any
    std::vector<std::string> artifacts;  // files written
    std::string summary;                 // one JSON object, single line
};

const std::vector<std::string>& experiment_names();

// Runs one registered experiment: computes, writes CSV + JSON-lines + SVG
// artifacts (when out_dir is set), evaluates the embedded assertions.
// Artifacts are a pure function of (spec, seed).
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace weyl
