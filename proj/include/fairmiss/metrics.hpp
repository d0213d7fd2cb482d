#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fairmiss/dataset.hpp"

namespace fairmiss {

struct GroupRate {
    int group = 0;
    double fpr = 0.0, fnr = 0.0, tpr = 0.0, tnr = 0.0;
    std::size_t negatives = 0;  // support of y = 0
    std::size_t positives = 0;  // support of y = 1
};

struct GroupRates {
    std::vector<GroupRate> groups;
};

// Plug-in confusion rates per group. Throws DataError naming the first empty
// (s, y) cell.
GroupRates group_rates(std::span<const int> predictions, const Dataset& ds);
double accuracy(std::span<const int> predictions, const Dataset& ds);

enum class DisparityKind { fnr_diff, fpr_diff, meo, eqodds_max };

DisparityKind parse_disparity(const std::string& name);
std::string to_string(DisparityKind kind);

// fnr-diff / fpr-diff: largest pairwise gap; meo: their average; eqodds-max:
// largest gap over y, yhat and group pairs.
double disparity(const GroupRates& rates, DisparityKind kind);

// Rates of the classifier that picks one of `members` uniformly at random per
// sample. Every member must list the same groups in the same order.
GroupRates uniform_mixture(std::span<const GroupRates> members);

struct TradeoffPoint {
    double accuracy = 0.0;
    double disparity = 0.0;
    std::map<std::string, std::string> provenance;
};

// Points not dominated by any other (accuracy >=, disparity <=, one strict),
// sorted by accuracy ascending; exact duplicates are kept once.
std::vector<TradeoffPoint> pareto_frontier(const std::vector<TradeoffPoint>& points);

}  // namespace fairmiss
