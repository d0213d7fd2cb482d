#include "fairmiss/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairmiss/error.hpp"
#include "fairmiss/information.hpp"
#include "fairmiss/lp.hpp"

namespace fairmiss {

FairOptimum brute_force_fair_optimal(const DiscreteTable& table, double epsilon) {
    const auto k = table.domain_size();
    if (k == 0 || k > 16) throw ParameterError("fair-optimum oracle supports 1..16 domain values");
    if (epsilon < 0.0) throw ParameterError("epsilon must be >= 0");
    if (std::abs(table.total() - 1.0) > 1e-9) throw ParameterError("probability table must sum to 1");

    lp::Problem prob;
    prob.n_vars = k;
    prob.objective.assign(k, 0.0);
    double constant = 0.0;  // accuracy of the all-zero classifier
    for (std::size_t s = 0; s < table.groups(); ++s)
        for (std::size_t x = 0; x < k; ++x) {
            prob.objective[x] += table.at(s, x, 1) - table.at(s, x, 0);
            constant += table.at(s, x, 0);
        }

    for (int y = 0; y <= 1; ++y)
        for (std::size_t s = 0; s < table.groups(); ++s)
            for (std::size_t t = s + 1; t < table.groups(); ++t) {
                const double ms = table.cell_mass(s, y), mt = table.cell_mass(t, y);
                if (ms <= 0.0 || mt <= 0.0) continue;
                std::vector<double> row(k), neg(k);
                for (std::size_t x = 0; x < k; ++x) {
                    row[x] = table.at(s, x, y) / ms - table.at(t, x, y) / mt;
                    neg[x] = -row[x];
                }
                prob.add_constraint(row, epsilon);
                prob.add_constraint(neg, epsilon);
            }
    for (std::size_t x = 0; x < k; ++x) {
        std::vector<double> up(k, 0.0);
        up[x] = 1.0;
        prob.add_constraint(up, 1.0);
    }

    // The all-zero classifier is feasible, so the LP is never infeasible.
    auto sol = lp::simplex_maximize(prob);
    if (!sol) throw Error("fair-optimum LP reported unbounded; the box constraints make this impossible");
    return {constant + sol->value, sol->x};
}

DiscreteTable impute_table(const DiscreteTable& table, std::size_t na_index, const std::vector<double>& mix) {
    if (na_index >= table.domain_size()) throw ParameterError("NA index outside the table domain");
    if (mix.size() + 1 != table.domain_size()) throw ParameterError("imputation mix needs one weight per non-NA value");
    double total = 0.0;
    for (double w : mix) {
        if (w < 0.0) throw ParameterError("imputation weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ParameterError("imputation weights must sum to 1");

    std::vector<std::string> domain;
    for (std::size_t x = 0; x < table.domain_size(); ++x)
        if (x != na_index) domain.push_back(table.domain()[x]);
    DiscreteTable out(table.groups(), domain);
    for (std::size_t s = 0; s < table.groups(); ++s)
        for (int y = 0; y <= 1; ++y) {
            std::size_t dst = 0;
            for (std::size_t x = 0; x < table.domain_size(); ++x) {
                if (x == na_index) continue;
                out.at(s, dst, y) = table.at(s, x, y) + mix[dst] * table.at(s, na_index, y);
                ++dst;
            }
        }
    return out;
}

Theorem1Report theorem1_report(const Theorem1Distribution& dist, double epsilon, std::size_t mixture_points) {
    const auto table = exact_theorem1(dist);
    const auto na = table.value_index("NA");
    Theorem1Report rep;
    rep.alpha = dist.alpha();
    rep.epsilon = epsilon;
    rep.f_original = brute_force_fair_optimal(table, epsilon).accuracy;
    rep.mutual_info = mutual_info_MY(table, na);
    rep.binary_entropy = binary_entropy(rep.alpha);

    auto evaluate = [&](std::string name, double weight_on_one) {
        const auto imputed = impute_table(table, na, {1.0 - weight_on_one, weight_on_one});
        rep.imputations.push_back({std::move(name), brute_force_fair_optimal(imputed, epsilon).accuracy});
    };
    evaluate("NA->0", 0.0);
    evaluate("NA->1", 1.0);
    for (std::size_t i = 1; i <= mixture_points; ++i) {
        const double w = static_cast<double>(i) / static_cast<double>(mixture_points + 1);
        std::ostringstream name;
        name << "mix(" << w << ")";
        evaluate(name.str(), w);
    }
    rep.f_imputed_best = 0.0;
    for (const auto& o : rep.imputations) rep.f_imputed_best = std::max(rep.f_imputed_best, o.accuracy);
    return rep;
}

}  // namespace fairmiss
