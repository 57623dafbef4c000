#pragma once

#include <cstddef>
#include <vector>

namespace weyl {

// Finite sampled path t_i -> v_i with values in R^m under the l^2 metric
// (m = 1 is the scalar case).  values is row-major: sample i occupies
// [i*dim, (i+1)*dim).
struct SampledPath {
    std::size_t dim = 1;
    std::vector<double> times;   // strictly increasing
    std::vector<double> values;  // times.size() * dim entries

    std::size_t length() const { return times.size(); }
    const double* sample(std::size_t i) const { return values.data() + i * dim; }

    void validate() const;  // throws invalid_argument on malformed data
};

// Scalar path on integer times 0..n-1.
SampledPath make_scalar_path(std::vector<double> v);

// Distance between samples i and j of p (l^2 over coordinates).
double path_dist(const SampledPath& p, std::size_t i, std::size_t j);

// Greedy jump count at altitude lambda: walk left to right, advance the
// anchor each time a value differs from it by strictly more than lambda.
// witness holds the anchor indices; count = witness.size() - 1.
struct JumpProfile {
    double lambda = 0;
    std::size_t count = 0;
    std::vector<std::size_t> witness;
};

JumpProfile jump_count(const SampledPath& p, double lambda);

// r-variation: sup over increasing index subsequences of
// (sum |increments|^r)^{1/r}, exact via the quadratic dynamic program.
// r > 2 by default; r in (1,2] only with allow_small_r.
double r_variation(const SampledPath& p, double r, bool allow_small_r = false);

// Same functional under the l^2(R^m) metric, plus the per-coordinate
// variations it is dominated by (l^2 aggregate of components).
struct VectorVariation {
    double value = 0;                  // variation of the vector path
    std::vector<double> components;    // variation of each coordinate path
    double component_l2 = 0;           // l^2 norm of components
};

VectorVariation vector_variation(const SampledPath& p, double r,
                                 bool allow_small_r = false);

// Minimal set of path values whose radius-2^{-v} balls cover all values.
// Exact search up to 20 samples, deterministic farthest-point greedy
// (2-approximation) above; `exact` records which ran.  parent[i] is the
// position in `centers` of the earliest center whose ball holds sample i.
struct EntropyCovering {
    int v = 0;
    double radius = 0;
    bool exact = true;
    std::vector<std::size_t> centers;  // sample indices
    std::vector<std::size_t> parent;   // one entry per sample
};

EntropyCovering entropy_covering(const SampledPath& p, int v);

}  // namespace weyl
