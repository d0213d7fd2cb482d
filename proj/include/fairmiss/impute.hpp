#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fairmiss/dataset.hpp"

namespace fairmiss {

struct ImputerSpec {
    enum class Method { zero, mean, knn, iterative };
    Method method = Method::zero;
    std::size_t knn_k = 5;
    std::size_t rounds = 10;
    double ridge_lambda = 1e-3;

    static ImputerSpec parse(const std::string& name);
    std::string name() const;
};

// Fitted imputation state. Zero imputation is usable without fitting; the other
// methods throw StateError from transform until fit has run.
class Imputer {
public:
    Imputer() = default;
    explicit Imputer(ImputerSpec spec) : spec_(spec) {}

    const ImputerSpec& spec() const { return spec_; }
    bool fitted() const { return fitted_; }

    void fit(const Dataset& train);
    // Fills every NA cell; observed cells are copied unchanged.
    Dataset transform(const Dataset& ds) const;
    Sample transform(const Sample& s) const;

    const std::vector<double>& means() const { return means_; }

    // Largest absolute change of imputed training cells in each round of the
    // iterative method (empty for the other methods).
    const std::vector<double>& round_changes() const { return round_changes_; }

private:
    struct Regression {
        std::vector<double> coef;  // one per feature; coef[target] unused
        double intercept = 0.0;
    };

    void fill_mean(Sample& s) const;
    void fill_knn(Sample& s) const;
    void apply_rounds(std::vector<Sample>& rows, const std::vector<MissingMask>& masks) const;

    ImputerSpec spec_;
    bool fitted_ = false;
    std::size_t dim_ = 0;
    std::vector<double> means_;
    std::vector<Sample> reference_;                // knn training rows
    std::vector<std::vector<Regression>> rounds_;  // [round][feature]
    std::vector<double> round_changes_;
};

// Partial Euclidean distance over coordinates observed in both rows, scaled by
// d / (#shared). Infinite when no coordinate is shared.
double partial_distance(const Sample& a, const Sample& b);

}  // namespace fairmiss
