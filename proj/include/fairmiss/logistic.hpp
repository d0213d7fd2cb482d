#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fairmiss/encode.hpp"

namespace fairmiss {

double sigmoid(double z);

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    double threshold = 0.5;

    double score(std::span<const double> row) const;  // sigmoid(w.x + b)
    int predict(std::span<const double> row) const { return score(row) >= threshold ? 1 : 0; }
    std::vector<double> scores(const EncodedDataset& enc) const;
    std::vector<int> predict(const EncodedDataset& enc) const;
};

struct OptimizerSettings {
    double l2 = 1e-4;            // lambda on weights; the bias is not penalized
    std::size_t max_iters = 5000;
    double tolerance = 1e-6;     // stop when the gradient norm falls below this
    double initial_step = 1.0;
};

enum class FairConstraint {
    mean_equalized_odds,  // penalize score gaps within both label cells
    fnr_difference,       // penalize score gaps within the positive cell only
};

FairConstraint parse_constraint(const std::string& name);
std::string to_string(FairConstraint c);

struct PenaltyConfig {
    double tau = 0.0;
    FairConstraint constraint = FairConstraint::mean_equalized_odds;
    OptimizerSettings optimizer;
};

// Objective over params = (w_1..w_p, b):
//   mean logistic loss + l2/2 |w|^2
//   + tau * sum over penalized labels y and group pairs (s, s') of
//     (mean score of cell (s, y) - mean score of cell (s', y))^2.
class LogisticObjective {
public:
    LogisticObjective(const EncodedDataset& data, double l2, double tau = 0.0,
                      FairConstraint constraint = FairConstraint::mean_equalized_odds);

    std::size_t dimension() const { return data_.cols + 1; }
    double value(std::span<const double> params) const;
    // Returns the value and writes the gradient.
    double value_and_gradient(std::span<const double> params, std::span<double> grad) const;

    // Score-gap penalty alone (without tau) at params.
    double penalty(std::span<const double> params) const;
    // log(p / (1 - p)) of the training labels; 0 when one label is absent.
    double base_log_odds() const;

private:
    const EncodedDataset& data_;
    double l2_;
    double tau_;
    std::vector<std::vector<std::size_t>> cells_;  // penalized cells, grouped per label
    std::vector<int> cell_label_;
};

struct TrainReport {
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
    double objective = 0.0;
};

// Full-batch gradient descent with Armijo backtracking, starting from zero
// weights and the label log-odds as bias.
LinearModel minimize(const LogisticObjective& objective, std::size_t n_weights,
                     const OptimizerSettings& settings, TrainReport* report = nullptr);

// L2-regularized logistic regression. Throws DataError for single-label data or
// non-finite features.
LinearModel train_logreg(const EncodedDataset& enc, const OptimizerSettings& settings = {},
                         TrainReport* report = nullptr);

// Logistic regression with the tau-weighted score-gap penalty. tau = 0 runs the
// exact same iteration as train_logreg.
LinearModel train_fair_penalty(const EncodedDataset& enc, const PenaltyConfig& cfg,
                               TrainReport* report = nullptr);

// Sum of per-row logistic losses plus n * l2/2 |w|^2 at the trained optimum, i.e.
// n times the minimized mean objective. Used as the cluster loss.
double minimized_total_loss(const EncodedDataset& enc, const OptimizerSettings& settings,
                            LinearModel* model = nullptr);

// Total (summed) regularized loss of a fixed model on a dataset, with the same
// n * l2/2 |w|^2 scaling.
double total_loss(const LinearModel& model, const EncodedDataset& enc, double l2);

std::string serialize(const LinearModel& model, const std::vector<std::string>& column_labels);

}  // namespace fairmiss
