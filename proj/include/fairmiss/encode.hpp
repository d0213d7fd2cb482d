#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fairmiss/dataset.hpp"
#include "fairmiss/impute.hpp"

namespace fairmiss {

// Where an encoded column came from.
struct ColumnTag {
    enum class Kind { original, indicator, cross };
    Kind kind = Kind::original;
    std::size_t feature = 0;   // j
    std::size_t modifier = 0;  // k, for cross = m_k (1 - m_j) x_j

    // "x:<name>", "m:<name>", "m:<name_k>*x:<name_j>".
    std::string label(const std::vector<std::string>& names) const;
    bool operator==(const ColumnTag&) const = default;
};

// Dense row-major design matrix without NA, with sensitive ids and labels
// carried through.
struct EncodedDataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<int> labels;
    std::vector<int> sensitive;
    std::vector<ColumnTag> tags;

    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
    double at(std::size_t i, std::size_t c) const { return values[i * cols + c]; }
    std::vector<int> groups() const;
};

enum class EncoderKind {
    imputed,     // imputed originals only (impute-then-classify)
    indicators,  // imputed originals followed by the d mask bits
    affine,      // zero-imputed originals, mask bits, and cross terms
};

std::string to_string(EncoderKind k);

// A fitted feature map from raw samples to encoded rows. The cross-term set of
// the affine encoder is fixed from the training data passed to fit.
class FeatureEncoder {
public:
    FeatureEncoder() = default;
    FeatureEncoder(EncoderKind kind, ImputerSpec imputer) : kind_(kind), imputer_(imputer) {}

    void fit(const Dataset& train);

    EncoderKind kind() const { return kind_; }
    const Imputer& imputer() const { return imputer_; }
    const std::vector<ColumnTag>& tags() const { return tags_; }
    std::size_t width() const { return tags_.size(); }
    // Features with at least one NA in the fitting data (affine only).
    const std::vector<std::size_t>& missing_features() const { return missing_features_; }

    std::vector<double> encode(const Sample& s) const;
    EncodedDataset encode(const Dataset& ds) const;

private:
    EncoderKind kind_ = EncoderKind::indicators;
    Imputer imputer_;
    std::size_t dim_ = 0;
    std::vector<std::size_t> missing_features_;
    std::vector<ColumnTag> tags_;
    bool fitted_ = false;
};

// Zero-imputed originals followed by indicators: exactly 2d columns.
EncodedDataset encode_indicators(const Dataset& ds);

// Zero-imputed originals, indicators, then m_k (1 - m_j) x_j for every feature k
// missing somewhere in `ds` and every j != k: 2d + n_miss (d - 1) columns.
EncodedDataset encode_affine(const Dataset& ds);

// Zero-imputed originals only; the design used inside missing-pattern clustering.
EncodedDataset encode_zero_imputed(const Dataset& ds);

}  // namespace fairmiss
