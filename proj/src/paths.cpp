#include "weyl/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace weyl {

void SampledPath::validate() const {
    if (dim == 0) throw std::invalid_argument("path: dimension 0");
    if (times.empty()) throw std::invalid_argument("path: no samples");
    if (values.size() != times.size() * dim)
        throw std::invalid_argument("path: value count does not match times * dim");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("path: times must be strictly increasing");
}

SampledPath make_scalar_path(std::vector<double> v) {
    SampledPath p;
    p.dim = 1;
    p.times.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) p.times[i] = double(i);
    p.values = std::move(v);
    return p;
}

double path_dist(const SampledPath& p, std::size_t i, std::size_t j) {
    const double* a = p.sample(i);
    const double* b = p.sample(j);
    double s = 0;
    for (std::size_t c = 0; c < p.dim; ++c) {
        double d = a[c] - b[c];
        s += d * d;
    }
    return std::sqrt(s);
}

JumpProfile jump_count(const SampledPath& p, double lambda) {
    p.validate();
    if (!(lambda > 0)) throw std::invalid_argument("jump_count: need lambda > 0");
    JumpProfile out;
    out.lambda = lambda;
    out.witness.push_back(0);
    for (std::size_t j = 1; j < p.length(); ++j)
        if (path_dist(p, out.witness.back(), j) > lambda) out.witness.push_back(j);
    out.count = out.witness.size() - 1;
    return out;
}

namespace {

double variation_dp(const SampledPath& p, double r) {
    std::size_t n = p.length();
    if (n < 2) return 0;
    // best[j]: max sum of |increment|^r over increasing subsequences ending at j.
    std::vector<double> best(n, 0.0);
    double top = 0;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            double cand = best[i] + std::pow(path_dist(p, i, j), r);
            if (cand > best[j]) best[j] = cand;
        }
        if (best[j] > top) top = best[j];
    }
    return std::pow(top, 1.0 / r);
}

void check_r(double r, bool allow_small_r) {
    if (r > 2) return;
    if (allow_small_r && r > 1) return;
    throw std::invalid_argument(
        "variation: r must exceed 2 (r in (1,2] needs allow_small_r)");
}

}  // namespace

double r_variation(const SampledPath& p, double r, bool allow_small_r) {
    p.validate();
    check_r(r, allow_small_r);
    return variation_dp(p, r);
}

VectorVariation vector_variation(const SampledPath& p, double r,
                                 bool allow_small_r) {
    p.validate();
    check_r(r, allow_small_r);
    VectorVariation out;
    out.value = variation_dp(p, r);
    for (std::size_t c = 0; c < p.dim; ++c) {
        SampledPath comp;
        comp.dim = 1;
        comp.times = p.times;
        comp.values.resize(p.length());
        for (std::size_t i = 0; i < p.length(); ++i)
            comp.values[i] = p.values[i * p.dim + c];
        out.components.push_back(variation_dp(comp, r));
    }
    double s = 0;
    for (double v : out.components) s += v * v;
    out.component_l2 = std::sqrt(s);
    return out;
}

namespace {

// Exact minimal cover by branch and bound over center subsets: always branch
// on an uncovered sample with the fewest candidate centers, prune at the
// best size found so far.
struct CoverSearch {
    std::size_t n;
    const std::vector<std::vector<std::size_t>>* covers;  // per sample: centers
    std::vector<std::size_t> best;
    std::vector<std::size_t> chosen;
    std::vector<int> covered;

    void run() {
        std::size_t uncovered_n = std::size_t(-1);
        std::size_t branch = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (covered[i]) continue;
            if ((*covers)[i].size() < uncovered_n) {
                uncovered_n = (*covers)[i].size();
                branch = i;
            }
        }
        if (branch == n) {  // everything covered
            if (best.empty() || chosen.size() < best.size()) best = chosen;
            return;
        }
        if (!best.empty() && chosen.size() + 1 >= best.size()) return;
        for (std::size_t center : (*covers)[branch]) {
            std::vector<std::size_t> flipped;
            for (std::size_t i = 0; i < n; ++i) {
                if (covered[i]) continue;
                for (std::size_t c2 : (*covers)[i])
                    if (c2 == center) {
                        covered[i] = 1;
                        flipped.push_back(i);
                        break;
                    }
            }
            chosen.push_back(center);
            run();
            chosen.pop_back();
            for (std::size_t i : flipped) covered[i] = 0;
        }
    }
};

}  // namespace

EntropyCovering entropy_covering(const SampledPath& p, int v) {
    p.validate();
    EntropyCovering out;
    out.v = v;
    out.radius = std::exp2(double(-v));
    std::size_t n = p.length();

    // A radius beyond twice the diameter needs only one ball.
    double diam = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            diam = std::max(diam, path_dist(p, i, j));
    if (out.radius > 2 * diam || n == 1) {
        out.centers = {0};
        out.parent.assign(n, 0);
        out.exact = true;
        return out;
    }

    if (n <= 20) {
        std::vector<std::vector<std::size_t>> covers(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < n; ++c)
                if (path_dist(p, i, c) <= out.radius) covers[i].push_back(c);
        CoverSearch search;
        search.n = n;
        search.covers = &covers;
        search.covered.assign(n, 0);
        search.run();
        std::sort(search.best.begin(), search.best.end());
        out.centers = search.best;
        out.exact = true;
    } else {
        // Farthest-point greedy: keep adding the sample farthest from the
        // current centers until every sample is within the radius.
        std::vector<double> near(n, std::numeric_limits<double>::infinity());
        out.centers.push_back(0);
        for (std::size_t i = 0; i < n; ++i) near[i] = path_dist(p, i, 0);
        for (;;) {
            std::size_t far = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (near[i] > near[far]) far = i;
            if (near[far] <= out.radius) break;
            out.centers.push_back(far);
            for (std::size_t i = 0; i < n; ++i)
                near[i] = std::min(near[i], path_dist(p, i, far));
        }
        std::sort(out.centers.begin(), out.centers.end());
        out.exact = false;
    }

    out.parent.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t who = out.centers.size();
        for (std::size_t c = 0; c < out.centers.size(); ++c)
            if (path_dist(p, i, out.centers[c]) <= out.radius) {
                who = c;
                break;
            }
        if (who == out.centers.size())
            throw std::runtime_error("entropy_covering: produced set fails to cover");
        out.parent[i] = who;
    }
    return out;
}

}  // namespace weyl
