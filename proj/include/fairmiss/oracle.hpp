#pragma once

#include <string>
#include <vector>

#include "fairmiss/missingness.hpp"
#include "fairmiss/table.hpp"

namespace fairmiss {

struct FairOptimum {
    double accuracy = 0.0;        // F_epsilon
    std::vector<double> positive; // Pr(yhat = 1 | x) per domain value
};

// Best accuracy over all randomized classifiers x -> Pr(yhat = 1 | x) subject to
// every equalized-odds gap |Pr(yhat = 1 | y, s) - Pr(yhat = 1 | y, s')| <= epsilon,
// solved exactly as a linear program. (s, y) cells with zero mass impose no
// constraint. Domain size is limited to 16.
FairOptimum brute_force_fair_optimal(const DiscreteTable& table, double epsilon);

// Replaces the NA value by a (possibly randomized) imputation: mass at NA moves
// to the remaining domain values in proportion to `mix` (one weight per
// non-NA value, in domain order, summing to 1).
DiscreteTable impute_table(const DiscreteTable& table, std::size_t na_index, const std::vector<double>& mix);

struct ImputationOutcome {
    std::string name;  // "NA->0", "NA->1", "mix(0.25)" (weight on 1)
    double accuracy = 0.0;
};

struct Theorem1Report {
    double alpha = 0.0;
    double epsilon = 0.0;
    double f_original = 0.0;
    double f_imputed_best = 0.0;
    std::vector<ImputationOutcome> imputations;
    double mutual_info = 0.0;     // I(M; Y) of the exact table
    double binary_entropy = 0.0;  // g(alpha)

    double gap() const { return f_original - f_imputed_best; }
};

// Evaluates F_epsilon on the exact table and on the imputed tables NA->0,
// NA->1, and `mixture_points` interior randomized imputations.
Theorem1Report theorem1_report(const Theorem1Distribution& dist, double epsilon, std::size_t mixture_points = 11);

}  // namespace fairmiss
