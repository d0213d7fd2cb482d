#include "fairmiss/postprocess.hpp"

#include <algorithm>

#include "fairmiss/error.hpp"
#include "fairmiss/lp.hpp"

namespace fairmiss {

PostprocessRates PostprocessRates::identity(std::vector<int> groups) {
    PostprocessRates r;
    r.flip.assign(groups.size(), {0.0, 0.0});
    r.groups = std::move(groups);
    return r;
}

std::size_t PostprocessRates::group_index(int s) const {
    auto it = std::find(groups.begin(), groups.end(), s);
    if (it == groups.end()) throw DataError("post-processor has no rates for group " + std::to_string(s));
    return static_cast<std::size_t>(it - groups.begin());
}

double PostprocessRates::positive_probability(int s, int yhat) const {
    const auto& f = flip[group_index(s)];
    return yhat == 1 ? 1.0 - f[1] : f[0];
}

int PostprocessRates::apply(int s, int yhat, std::mt19937_64& rng) const {
    const double p = flip[group_index(s)][static_cast<std::size_t>(yhat)];
    if (p <= 0.0) return yhat;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return unif(rng) < p ? 1 - yhat : yhat;
}

namespace {

struct CellStats {
    double mass[2] = {0.0, 0.0};       // Pr(y, s)
    double positive[2] = {0.0, 0.0};   // Pr(yhat = 1 | y, s)
};

std::vector<CellStats> base_stats(std::span<const double> scores, const Dataset& ds,
                                  const std::vector<int>& groups) {
    if (scores.size() != ds.size()) throw DataError("post-processor: score count does not match dataset size");
    std::vector<CellStats> st(groups.size());
    std::vector<std::array<double, 2>> count(groups.size(), {0.0, 0.0});
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto g = static_cast<std::size_t>(std::find(groups.begin(), groups.end(), ds[i].sensitive) - groups.begin());
        const auto y = static_cast<std::size_t>(ds[i].label);
        count[g][y] += 1.0;
        st[g].positive[y] += scores[i] >= 0.5 ? 1.0 : 0.0;
    }
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t y = 0; y < 2; ++y) {
            if (count[g][y] == 0.0)
                throw DataError("post-processor: cell " + to_string(CellKey{groups[g], static_cast<int>(y)}) + " is empty");
            st[g].positive[y] /= count[g][y];
            st[g].mass[y] = count[g][y] / static_cast<double>(ds.size());
        }
    return st;
}

}  // namespace

std::vector<std::array<double, 2>> mixed_positive_rates(const PostprocessRates& rates,
                                                        std::span<const double> scores, const Dataset& ds) {
    const auto st = base_stats(scores, ds, rates.groups);
    std::vector<std::array<double, 2>> out(rates.groups.size());
    for (std::size_t g = 0; g < rates.groups.size(); ++g)
        for (std::size_t y = 0; y < 2; ++y) {
            const double base = st[g].positive[y];
            out[g][y] = base * (1.0 - rates.flip[g][1]) + (1.0 - base) * rates.flip[g][0];
        }
    return out;
}

PostprocessRates postprocess_eqodds(std::span<const double> scores, const Dataset& ds, double epsilon) {
    for (double s : scores)
        if (!(s >= 0.0 && s <= 1.0)) throw ParameterError("post-processor scores must lie in [0, 1]");
    if (epsilon < 0.0) throw ParameterError("epsilon must be >= 0");
    const auto groups = ds.groups();
    if (groups.size() != 2) throw DataError("equalized-odds post-processing supports exactly two groups");
    const auto st = base_stats(scores, ds, groups);

    // Variables: (p_{g0,0}, p_{g0,1}, p_{g1,0}, p_{g1,1}); p_{g,yhat} flips yhat.
    // Positive rate r_{g,y} = base + coef . p, with coef nonzero on group g only.
    auto rate_coef = [&](std::size_t g, std::size_t y) {
        std::vector<double> c(4, 0.0);
        const double base = st[g].positive[y];
        c[2 * g + 0] = 1.0 - base;
        c[2 * g + 1] = -base;
        return c;
    };

    lp::Problem prob;
    prob.n_vars = 4;
    prob.objective.assign(4, 0.0);
    for (std::size_t g = 0; g < 2; ++g) {
        // error = pi_{g,1} (1 - r_{g,1}) + pi_{g,0} r_{g,0}; maximize -error.
        const auto c1 = rate_coef(g, 1), c0 = rate_coef(g, 0);
        for (std::size_t k = 0; k < 4; ++k)
            prob.objective[k] += st[g].mass[1] * c1[k] - st[g].mass[0] * c0[k];
    }
    for (std::size_t y = 0; y < 2; ++y) {
        const auto a = rate_coef(0, y), b = rate_coef(1, y);
        std::vector<double> diff(4), neg(4);
        for (std::size_t k = 0; k < 4; ++k) {
            diff[k] = a[k] - b[k];
            neg[k] = -diff[k];
        }
        const double base_gap = st[0].positive[y] - st[1].positive[y];
        prob.add_constraint(diff, epsilon - base_gap);
        prob.add_constraint(neg, epsilon + base_gap);
    }
    prob.add_unit_box();

    auto sol = lp::enumerate_vertices(prob, std::vector<double>(4, 1.0));
    if (!sol) throw Error("post-processing LP has no feasible vertex");

    PostprocessRates out;
    out.groups = groups;
    out.flip.resize(2);
    for (std::size_t g = 0; g < 2; ++g)
        for (std::size_t yh = 0; yh < 2; ++yh)
            out.flip[g][yh] = std::clamp(sol->x[2 * g + yh], 0.0, 1.0);
    return out;
}

}  // namespace fairmiss
