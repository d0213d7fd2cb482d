#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "fairmiss/dataset.hpp"

namespace fairmiss {

// Randomized equalized-odds correction of a thresholded score. flip[g][yhat]
// is the probability of flipping base prediction yhat for the g-th group in
// `groups`.
struct PostprocessRates {
    std::vector<int> groups;
    std::vector<std::array<double, 2>> flip;

    static PostprocessRates identity(std::vector<int> groups);

    // Pr(final prediction = 1) for a sample of group s with base prediction yhat.
    double positive_probability(int s, int yhat) const;
    int apply(int s, int yhat, std::mt19937_64& rng) const;

private:
    std::size_t group_index(int s) const;
};

// Solves the two-group linear program minimizing expected error of the
// randomized predictor subject to |FPR gap| <= epsilon and |FNR gap| <= epsilon,
// with base predictions scores >= 0.5 and rates measured on `ds`. Exact: every
// vertex of the 4-dimensional feasible polytope is enumerated; ties prefer the
// fewest flips.
PostprocessRates postprocess_eqodds(std::span<const double> scores, const Dataset& ds, double epsilon);

// Expected positive rate Pr(final = 1 | y, s) after mixing, measured on ds.
// Indexed [group position][y].
std::vector<std::array<double, 2>> mixed_positive_rates(const PostprocessRates& rates,
                                                        std::span<const double> scores, const Dataset& ds);

}  // namespace fairmiss
