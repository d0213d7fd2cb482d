#pragma once

#include <array>
#include <span>
#include <vector>

#include "fairmiss/dataset.hpp"
#include "fairmiss/table.hpp"

namespace fairmiss {

// All quantities in bits. Plug-in estimators only.

// g(a) = -a log2 a - (1 - a) log2 (1 - a), with g(0) = g(1) = 0.
double binary_entropy(double a);

// Joint mass over (t, y): joint[t][y]. Need not be normalized.
using JointTY = std::vector<std::array<double, 2>>;

double conditional_entropy(const JointTY& joint);  // H(Y | T)
double mutual_information(const JointTY& joint);   // I(T; Y)

// Discrete tuple per row; rows with equal tuples fall in the same cell.
using Tuple = std::vector<long long>;

// Plug-in H(Y | T) from samples. The sum runs over cells in a canonical order
// (sorted by their label counts), so two tuple columns inducing the same
// partition of the rows give bit-identical results.
double conditional_entropy(std::span<const int> y, std::span<const Tuple> tuples);
double mutual_information(std::span<const int> y, std::span<const Tuple> tuples);

// Tuple views of a dataset's features. Values are keyed by their exact bit
// pattern; NA is a sentinel distinct from every value.
enum class TupleView {
    raw,             // x with NA
    zero_imputed,    // x-hat with NA -> 0
    imputed_and_mask // (x-hat, m)
};
std::vector<Tuple> feature_tuples(const Dataset& ds, TupleView view);

// Plug-in I(M; Y) between the full missing pattern and the label.
double mutual_info_MY(const Dataset& ds);

// I(M; Y) of an exact single-feature table where `na_index` is the NA value.
double mutual_info_MY(const DiscreteTable& table, std::size_t na_index);

}  // namespace fairmiss
