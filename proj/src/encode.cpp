#include "fairmiss/encode.hpp"

#include <set>

#include "fairmiss/error.hpp"

namespace fairmiss {

std::string ColumnTag::label(const std::vector<std::string>& names) const {
    switch (kind) {
        case Kind::original: return "x:" + names.at(feature);
        case Kind::indicator: return "m:" + names.at(feature);
        case Kind::cross: return "m:" + names.at(modifier) + "*x:" + names.at(feature);
    }
    return {};
}

std::vector<int> EncodedDataset::groups() const {
    std::set<int> g(sensitive.begin(), sensitive.end());
    return {g.begin(), g.end()};
}

std::string to_string(EncoderKind k) {
    switch (k) {
        case EncoderKind::imputed: return "imputed";
        case EncoderKind::indicators: return "indicators";
        case EncoderKind::affine: return "affine";
    }
    return "imputed";
}

void FeatureEncoder::fit(const Dataset& train) {
    dim_ = train.dimension();
    if (kind_ == EncoderKind::affine) imputer_ = Imputer(ImputerSpec{});
    imputer_.fit(train);

    missing_features_.clear();
    if (kind_ == EncoderKind::affine)
        for (std::size_t k = 0; k < dim_; ++k)
            for (const auto& s : train.samples())
                if (!s.features[k]) {
                    missing_features_.push_back(k);
                    break;
                }

    tags_.clear();
    for (std::size_t j = 0; j < dim_; ++j) tags_.push_back({ColumnTag::Kind::original, j, 0});
    if (kind_ != EncoderKind::imputed)
        for (std::size_t j = 0; j < dim_; ++j) tags_.push_back({ColumnTag::Kind::indicator, j, 0});
    for (auto k : missing_features_)
        for (std::size_t j = 0; j < dim_; ++j)
            if (j != k) tags_.push_back({ColumnTag::Kind::cross, j, k});
    fitted_ = true;
}

std::vector<double> FeatureEncoder::encode(const Sample& s) const {
    if (!fitted_) throw StateError("feature encoder used before fit");
    if (s.features.size() != dim_) throw DataError("encoder: sample dimension mismatch");
    const Sample filled = imputer_.transform(s);
    std::vector<double> row;
    row.reserve(tags_.size());
    for (const auto& t : tags_) {
        switch (t.kind) {
            case ColumnTag::Kind::original: row.push_back(*filled.features[t.feature]); break;
            case ColumnTag::Kind::indicator: row.push_back(s.features[t.feature] ? 0.0 : 1.0); break;
            case ColumnTag::Kind::cross: {
                const bool k_missing = !s.features[t.modifier];
                const auto& xj = s.features[t.feature];
                row.push_back(k_missing && xj ? *xj : 0.0);
                break;
            }
        }
    }
    return row;
}

EncodedDataset FeatureEncoder::encode(const Dataset& ds) const {
    EncodedDataset out;
    out.rows = ds.size();
    out.cols = tags_.size();
    out.tags = tags_;
    out.values.reserve(out.rows * out.cols);
    for (const auto& s : ds.samples()) {
        auto row = encode(s);
        out.values.insert(out.values.end(), row.begin(), row.end());
        out.labels.push_back(s.label);
        out.sensitive.push_back(s.sensitive);
    }
    return out;
}

namespace {

EncodedDataset encode_with(EncoderKind kind, const Dataset& ds) {
    FeatureEncoder enc(kind, ImputerSpec{});
    enc.fit(ds);
    return enc.encode(ds);
}

}  // namespace

EncodedDataset encode_indicators(const Dataset& ds) { return encode_with(EncoderKind::indicators, ds); }
EncodedDataset encode_affine(const Dataset& ds) { return encode_with(EncoderKind::affine, ds); }
EncodedDataset encode_zero_imputed(const Dataset& ds) { return encode_with(EncoderKind::imputed, ds); }

}  // namespace fairmiss
