#include "fairmiss/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "fairmiss/error.hpp"

namespace fairmiss {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double linear(std::span<const double> w, double b, std::span<const double> x) {
    double z = b;
    for (std::size_t k = 0; k < x.size(); ++k) z += w[k] * x[k];
    return z;
}

void check_trainable(const EncodedDataset& enc) {
    bool has0 = false, has1 = false;
    for (int y : enc.labels) (y ? has1 : has0) = true;
    if (!has0 || !has1) throw DataError("logistic regression needs samples of both labels");
    for (double v : enc.values)
        if (!std::isfinite(v)) throw DataError("logistic regression: non-finite feature value");
}

}  // namespace

double LinearModel::score(std::span<const double> row) const {
    return sigmoid(linear(weights, bias, row));
}

std::vector<double> LinearModel::scores(const EncodedDataset& enc) const {
    std::vector<double> out(enc.rows);
    for (std::size_t i = 0; i < enc.rows; ++i) out[i] = score(enc.row(i));
    return out;
}

std::vector<int> LinearModel::predict(const EncodedDataset& enc) const {
    std::vector<int> out(enc.rows);
    for (std::size_t i = 0; i < enc.rows; ++i) out[i] = predict(enc.row(i));
    return out;
}

FairConstraint parse_constraint(const std::string& name) {
    if (name == "meo" || name == "mean-equalized-odds") return FairConstraint::mean_equalized_odds;
    if (name == "fnr" || name == "fnr-difference") return FairConstraint::fnr_difference;
    throw ParameterError("unknown fairness constraint '" + name + "'");
}

std::string to_string(FairConstraint c) {
    return c == FairConstraint::mean_equalized_odds ? "meo" : "fnr";
}

// ---------------------------------------------------------------------------
// Objective
// ---------------------------------------------------------------------------

LogisticObjective::LogisticObjective(const EncodedDataset& data, double l2, double tau,
                                     FairConstraint constraint)
    : data_(data), l2_(l2), tau_(tau) {
    if (tau < 0.0) throw ParameterError("penalty weight tau must be >= 0");
    if (tau == 0.0) return;
    std::map<std::pair<int, int>, std::vector<std::size_t>> by_cell;  // (y, s)
    for (std::size_t i = 0; i < data.rows; ++i) by_cell[{data.labels[i], data.sensitive[i]}].push_back(i);
    const auto groups = data.groups();
    if (groups.size() < 2) throw DataError("fairness penalty needs at least two groups");
    for (int y = 0; y <= 1; ++y) {
        if (constraint == FairConstraint::fnr_difference && y == 0) continue;
        for (int s : groups) {
            auto it = by_cell.find({y, s});
            if (it == by_cell.end())
                throw DataError("fairness penalty: cell " + to_string(CellKey{s, y}) + " is empty");
            cells_.push_back(it->second);
            cell_label_.push_back(y);
        }
    }
}

double LogisticObjective::base_log_odds() const {
    double pos = 0.0;
    for (int y : data_.labels) pos += y;
    const double n = static_cast<double>(data_.labels.size());
    if (pos <= 0.0 || pos >= n) return 0.0;
    return std::log(pos / (n - pos));
}

double LogisticObjective::penalty(std::span<const double> params) const {
    const std::span<const double> w = params.first(data_.cols);
    const double b = params[data_.cols];
    std::vector<double> means(cells_.size(), 0.0);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        for (auto i : cells_[c]) means[c] += sigmoid(linear(w, b, data_.row(i)));
        means[c] /= static_cast<double>(cells_[c].size());
    }
    double pen = 0.0;
    for (std::size_t a = 0; a < cells_.size(); ++a)
        for (std::size_t c = a + 1; c < cells_.size(); ++c)
            if (cell_label_[a] == cell_label_[c]) pen += (means[a] - means[c]) * (means[a] - means[c]);
    return pen;
}

double LogisticObjective::value(std::span<const double> params) const {
    const std::span<const double> w = params.first(data_.cols);
    const double b = params[data_.cols];
    double loss = 0.0;
    for (std::size_t i = 0; i < data_.rows; ++i) {
        const double z = linear(w, b, data_.row(i));
        loss += softplus(z) - data_.labels[i] * z;
    }
    double reg = 0.0;
    for (double v : w) reg += v * v;
    double out = loss / static_cast<double>(data_.rows) + 0.5 * l2_ * reg;
    if (tau_ != 0.0) out += tau_ * penalty(params);
    return out;
}

double LogisticObjective::value_and_gradient(std::span<const double> params, std::span<double> grad) const {
    const std::size_t p = data_.cols;
    const std::span<const double> w = params.first(p);
    const double b = params[p];
    const double inv_n = 1.0 / static_cast<double>(data_.rows);
    std::fill(grad.begin(), grad.end(), 0.0);

    std::vector<double> sig(data_.rows);
    double loss = 0.0;
    for (std::size_t i = 0; i < data_.rows; ++i) {
        const auto x = data_.row(i);
        const double z = linear(w, b, x);
        sig[i] = sigmoid(z);
        loss += softplus(z) - data_.labels[i] * z;
        const double r = (sig[i] - data_.labels[i]) * inv_n;
        for (std::size_t k = 0; k < p; ++k) grad[k] += r * x[k];
        grad[p] += r;
    }
    double reg = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
        reg += w[k] * w[k];
        grad[k] += l2_ * w[k];
    }
    double out = loss * inv_n + 0.5 * l2_ * reg;
    if (tau_ == 0.0) return out;

    // Cell means and their parameter gradients.
    const std::size_t nc = cells_.size();
    std::vector<double> means(nc, 0.0);
    std::vector<std::vector<double>> dmeans(nc, std::vector<double>(p + 1, 0.0));
    for (std::size_t c = 0; c < nc; ++c) {
        const double inv_c = 1.0 / static_cast<double>(cells_[c].size());
        for (auto i : cells_[c]) {
            means[c] += sig[i] * inv_c;
            const double ds = sig[i] * (1.0 - sig[i]) * inv_c;
            const auto x = data_.row(i);
            for (std::size_t k = 0; k < p; ++k) dmeans[c][k] += ds * x[k];
            dmeans[c][p] += ds;
        }
    }
    double pen = 0.0;
    for (std::size_t a = 0; a < nc; ++a)
        for (std::size_t c = a + 1; c < nc; ++c) {
            if (cell_label_[a] != cell_label_[c]) continue;
            const double gap = means[a] - means[c];
            pen += gap * gap;
            for (std::size_t k = 0; k <= p; ++k) grad[k] += tau_ * 2.0 * gap * (dmeans[a][k] - dmeans[c][k]);
        }
    return out + tau_ * pen;
}

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

LinearModel minimize(const LogisticObjective& objective, std::size_t n_weights,
                     const OptimizerSettings& settings, TrainReport* report) {
    const std::size_t dim = objective.dimension();
    std::vector<double> theta(dim, 0.0), grad(dim), trial(dim), trial_grad(dim);
    theta[n_weights] = objective.base_log_odds();
    double f = objective.value_and_gradient(theta, grad);
    auto norm = [](const std::vector<double>& v) {
        return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    };
    double gnorm = norm(grad);
    double step = settings.initial_step;
    std::size_t iter = 0;

    constexpr double armijo = 1e-4;
    constexpr double min_step = 1e-16;
    while (iter < settings.max_iters && gnorm > settings.tolerance) {
        const double g2 = gnorm * gnorm;
        double ft = 0.0;
        while (true) {
            for (std::size_t k = 0; k < dim; ++k) trial[k] = theta[k] - step * grad[k];
            ft = objective.value_and_gradient(trial, trial_grad);
            if (ft <= f - armijo * step * g2 || step < min_step) break;
            step *= 0.5;
        }
        if (step < min_step) break;
        theta.swap(trial);
        grad.swap(trial_grad);
        f = ft;
        gnorm = norm(grad);
        step *= 2.0;
        ++iter;
    }
    if (report) *report = {iter, gnorm, f};

    LinearModel m;
    m.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(n_weights));
    m.bias = theta[n_weights];
    return m;
}

LinearModel train_logreg(const EncodedDataset& enc, const OptimizerSettings& settings,
                         TrainReport* report) {
    check_trainable(enc);
    LogisticObjective objective(enc, settings.l2);
    return minimize(objective, enc.cols, settings, report);
}

LinearModel train_fair_penalty(const EncodedDataset& enc, const PenaltyConfig& cfg, TrainReport* report) {
    check_trainable(enc);
    if (enc.groups().size() < 2) throw DataError("fairness penalty needs at least two groups");
    LogisticObjective objective(enc, cfg.optimizer.l2, cfg.tau, cfg.constraint);
    return minimize(objective, enc.cols, cfg.optimizer, report);
}

double total_loss(const LinearModel& model, const EncodedDataset& enc, double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < enc.rows; ++i) {
        const double z = linear(model.weights, model.bias, enc.row(i));
        loss += softplus(z) - enc.labels[i] * z;
    }
    double reg = 0.0;
    for (double v : model.weights) reg += v * v;
    return loss + static_cast<double>(enc.rows) * 0.5 * l2 * reg;
}

double minimized_total_loss(const EncodedDataset& enc, const OptimizerSettings& settings, LinearModel* model) {
    if (enc.rows == 0) throw DataError("cannot minimize a loss over zero rows");
    for (double v : enc.values)
        if (!std::isfinite(v)) throw DataError("logistic regression: non-finite feature value");
    // Single-label clusters are allowed here: the loss tends to 0 as the bias grows.
    LogisticObjective objective(enc, settings.l2);
    auto m = minimize(objective, enc.cols, settings);
    const double out = total_loss(m, enc, settings.l2);
    if (model) *model = std::move(m);
    return out;
}

std::string serialize(const LinearModel& model, const std::vector<std::string>& column_labels) {
    std::ostringstream out;
    out.precision(17);
    out << "bias " << model.bias << "\n";
    out << "threshold " << model.threshold << "\n";
    for (std::size_t k = 0; k < model.weights.size(); ++k)
        out << (k < column_labels.size() ? column_labels[k] : "w" + std::to_string(k)) << " "
            << model.weights[k] << "\n";
    return out.str();
}

}  // namespace fairmiss
