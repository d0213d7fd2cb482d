#include "fairmiss/impute.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "fairmiss/error.hpp"
#include "logging.hpp"

namespace fairmiss {

ImputerSpec ImputerSpec::parse(const std::string& name) {
    ImputerSpec spec;
    if (name == "zero") spec.method = Method::zero;
    else if (name == "mean") spec.method = Method::mean;
    else if (name == "knn") spec.method = Method::knn;
    else if (name == "iterative") spec.method = Method::iterative;
    else throw ParameterError("unknown imputer '" + name + "'");
    return spec;
}

std::string ImputerSpec::name() const {
    switch (method) {
        case Method::zero: return "zero";
        case Method::mean: return "mean";
        case Method::knn: return "knn";
        case Method::iterative: return "iterative";
    }
    return "zero";
}

double partial_distance(const Sample& a, const Sample& b) {
    const auto d = a.features.size();
    double sum = 0.0;
    std::size_t shared = 0;
    for (std::size_t j = 0; j < d; ++j) {
        if (!a.features[j] || !b.features[j]) continue;
        const double diff = *a.features[j] - *b.features[j];
        sum += diff * diff;
        ++shared;
    }
    if (shared == 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(sum * static_cast<double>(d) / static_cast<double>(shared));
}

void Imputer::fit(const Dataset& train) {
    using M = ImputerSpec::Method;
    dim_ = train.dimension();
    means_.assign(dim_, 0.0);
    reference_.clear();
    rounds_.clear();
    round_changes_.clear();
    fitted_ = false;
    if (spec_.method == M::zero) {
        fitted_ = true;
        return;
    }
    if (train.empty()) throw DataError("cannot fit an imputer on an empty dataset");

    std::vector<std::size_t> observed(dim_, 0);
    for (const auto& s : train.samples())
        for (std::size_t j = 0; j < dim_; ++j)
            if (s.features[j]) {
                means_[j] += *s.features[j];
                ++observed[j];
            }
    for (std::size_t j = 0; j < dim_; ++j) {
        if (observed[j] == 0)
            throw DataError("imputer fit: feature '" + train.feature_names()[j] +
                            "' has no observed training values");
        means_[j] /= static_cast<double>(observed[j]);
    }

    if (spec_.method == M::knn) {
        if (spec_.knn_k < 1 || spec_.knn_k > train.size())
            throw ParameterError("knn imputer needs 1 <= k <= number of training rows");
        reference_ = train.samples();
    }

    if (spec_.method == M::iterative) {
        auto rows = train.samples();
        auto masks = train.masks();
        for (auto& s : rows) fill_mean(s);

        for (std::size_t r = 0; r < spec_.rounds; ++r) {
            std::vector<Regression> models(dim_);
            double max_change = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) {
                std::vector<std::size_t> fit_rows;
                for (std::size_t i = 0; i < rows.size(); ++i)
                    if (!masks[i].missing(j)) fit_rows.push_back(i);
                const auto n = static_cast<Eigen::Index>(fit_rows.size());
                const auto p = static_cast<Eigen::Index>(dim_);

                Eigen::MatrixXd x(n, p);
                Eigen::VectorXd y(n);
                for (Eigen::Index a = 0; a < n; ++a) {
                    const auto& s = rows[fit_rows[static_cast<std::size_t>(a)]];
                    for (Eigen::Index k = 0; k < p; ++k)
                        x(a, k) = static_cast<std::size_t>(k) == j ? 0.0 : *s.features[static_cast<std::size_t>(k)];
                    y(a) = *s.features[j];
                }
                const Eigen::RowVectorXd xbar = x.colwise().mean();
                const double ybar = y.mean();
                const Eigen::MatrixXd xc = x.rowwise() - xbar;
                const Eigen::VectorXd yc = y.array() - ybar;
                Eigen::MatrixXd gram = xc.transpose() * xc;
                gram.diagonal().array() += spec_.ridge_lambda;
                const Eigen::VectorXd beta = gram.ldlt().solve(xc.transpose() * yc);

                Regression& m = models[j];
                m.coef.assign(beta.data(), beta.data() + beta.size());
                m.coef[j] = 0.0;
                m.intercept = ybar - xbar.dot(beta);

                for (std::size_t i = 0; i < rows.size(); ++i) {
                    if (!masks[i].missing(j)) continue;
                    double pred = m.intercept;
                    for (std::size_t k = 0; k < dim_; ++k)
                        if (k != j) pred += m.coef[k] * *rows[i].features[k];
                    max_change = std::max(max_change, std::abs(pred - *rows[i].features[j]));
                    rows[i].features[j] = pred;
                }
            }
            rounds_.push_back(std::move(models));
            if (!round_changes_.empty() && max_change > round_changes_.back() + 1e-9)
                log::debug("iterative imputer: round {} change {:.3g} exceeds previous {:.3g}", r,
                           max_change, round_changes_.back());
            round_changes_.push_back(max_change);
        }
    }
    fitted_ = true;
}

void Imputer::fill_mean(Sample& s) const {
    for (std::size_t j = 0; j < dim_; ++j)
        if (!s.features[j]) s.features[j] = means_[j];
}

void Imputer::fill_knn(Sample& s) const {
    const Sample query = s;
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(reference_.size());
    for (std::size_t i = 0; i < reference_.size(); ++i)
        order.emplace_back(partial_distance(query, reference_[i]), i);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    for (std::size_t j = 0; j < dim_; ++j) {
        if (query.features[j]) continue;
        double sum = 0.0;
        std::size_t used = 0;
        for (const auto& [dist, i] : order) {
            if (used == spec_.knn_k) break;
            if (!std::isfinite(dist) || !reference_[i].features[j]) continue;
            sum += *reference_[i].features[j];
            ++used;
        }
        s.features[j] = used ? sum / static_cast<double>(used) : means_[j];
    }
}

void Imputer::apply_rounds(std::vector<Sample>& rows, const std::vector<MissingMask>& masks) const {
    for (const auto& models : rounds_)
        for (std::size_t j = 0; j < dim_; ++j) {
            const auto& m = models[j];
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (!masks[i].missing(j)) continue;
                double pred = m.intercept;
                for (std::size_t k = 0; k < dim_; ++k)
                    if (k != j) pred += m.coef[k] * *rows[i].features[k];
                rows[i].features[j] = pred;
            }
        }
}

Sample Imputer::transform(const Sample& s) const {
    using M = ImputerSpec::Method;
    if (spec_.method == M::zero) {
        Sample out = s;
        for (auto& c : out.features)
            if (!c) c = 0.0;
        return out;
    }
    if (!fitted_) throw StateError("imputer '" + spec_.name() + "' used before fit");
    if (s.features.size() != dim_) throw DataError("imputer transform: dimension mismatch");
    Sample out = s;
    if (out.complete()) return out;
    switch (spec_.method) {
        case M::mean: fill_mean(out); break;
        case M::knn: fill_knn(out); break;
        case M::iterative: {
            std::vector<Sample> rows{out};
            std::vector<MissingMask> masks{s.mask()};
            fill_mean(rows[0]);
            apply_rounds(rows, masks);
            out = std::move(rows[0]);
            break;
        }
        case M::zero: break;
    }
    return out;
}

Dataset Imputer::transform(const Dataset& ds) const {
    std::vector<Sample> out;
    out.reserve(ds.size());
    for (const auto& s : ds.samples()) out.push_back(transform(s));
    return ds.with_samples(std::move(out));
}

}  // namespace fairmiss
