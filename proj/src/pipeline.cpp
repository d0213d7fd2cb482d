#include "fairmiss/pipeline.hpp"

#include <random>
#include <set>
#include <sstream>

#include "fairmiss/error.hpp"
#include "logging.hpp"

namespace fairmiss {

namespace {

EncoderKind encoder_for(Method m) {
    switch (m) {
        case Method::indicators: return EncoderKind::indicators;
        case Method::affine: return EncoderKind::affine;
        default: return EncoderKind::imputed;
    }
}

// A cluster may hold one label only, or miss an (s, y) cell the intervention
// needs. The first case gets a constant predictor; the second falls back to
// plain logistic regression.
FairModel train_leaf(const Dataset& rows, const InterventionSpec& spec, std::size_t leaf) {
    FeatureEncoder enc(EncoderKind::imputed, ImputerSpec{});
    std::set<int> labels;
    for (const auto& s : rows.samples()) labels.insert(s.label);
    if (labels.size() == 1) {
        log::warn("cluster {} holds a single label; using a constant predictor", leaf);
        enc.fit(rows);
        FairModel m;
        m.model.weights.assign(enc.width(), 0.0);
        m.model.bias = *labels.begin() == 1 ? 1.0 : -1.0;
        m.encoder = std::move(enc);
        return m;
    }
    bool cells_ok = rows.groups().size() >= 2;
    for (const auto& [key, idx] : rows.cells()) cells_ok = cells_ok && !idx.empty();
    if (spec.kind != InterventionSpec::Kind::none && !cells_ok) {
        log::warn("cluster {} lacks an (s, y) cell; training it without the intervention", leaf);
        InterventionSpec plain = spec;
        plain.kind = InterventionSpec::Kind::none;
        return train_fair_model(std::move(enc), rows, plain);
    }
    return train_fair_model(std::move(enc), rows, spec);
}

}  // namespace

FittedPipeline fit_pipeline(const PipelineSpec& spec, const Dataset& train, std::uint64_t seed) {
    FittedPipeline out;
    out.method_ = spec.method;
    switch (spec.method) {
        case Method::impute_then_classify:
        case Method::indicators:
        case Method::affine:
            out.models_.push_back(train_fair_model(FeatureEncoder(encoder_for(spec.method), spec.imputer), train,
                                                   spec.intervention));
            break;
        case Method::clustering: {
            auto opts = spec.cluster;
            opts.seed = seed;
            auto part = std::make_shared<ClusterPartition>(cluster_missing_patterns(train, opts));
            log::debug("clustering produced {} clusters", part->cluster_count());
            for (std::size_t q = 0; q < part->cluster_count(); ++q)
                out.models_.push_back(train_leaf(train.subset(part->cluster_rows(q)), spec.intervention, q));
            out.partition_ = std::move(part);
            break;
        }
        case Method::fairmissbag: {
            BagOptions bo;
            bo.bags = spec.bags;
            bo.intervention = spec.intervention;
            bo.imputer = spec.imputer;
            bo.encoder = EncoderKind::indicators;
            bo.mode = spec.ensemble_mode;
            out.ensemble_ = std::make_shared<FairEnsemble>(fair_miss_bag(train, bo, seed));
            break;
        }
    }
    return out;
}

int FittedPipeline::predict(const Sample& s, std::uint64_t seed) const {
    if (ensemble_) return ensemble_predict(*ensemble_, s, seed).label;
    std::mt19937_64 rng(seed);
    if (partition_) {
        const int q = partition_->assign(s.mask());
        return models_.at(static_cast<std::size_t>(q)).predict(s, rng);
    }
    if (models_.empty()) throw StateError("pipeline has not been fitted");
    return models_.front().predict(s, rng);
}

std::vector<int> FittedPipeline::predict(const Dataset& ds, std::uint64_t seed) const {
    std::vector<int> out;
    out.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) out.push_back(predict(ds[i], seed + i));
    return out;
}

std::string FittedPipeline::serialize(const std::vector<std::string>& feature_names) const {
    std::ostringstream out;
    out << "method " << to_string(method_) << "\n";
    if (partition_) out << partition_->serialize();
    if (ensemble_) {
        out << "ensemble " << to_string(ensemble_->mode) << " members " << ensemble_->size() << "\n";
        for (std::size_t b = 0; b < ensemble_->size(); ++b)
            out << "member " << b << "\n" << ensemble_->members[b].serialize(feature_names);
    }
    for (std::size_t q = 0; q < models_.size(); ++q) {
        if (partition_) out << "cluster " << q << "\n";
        out << models_[q].serialize(feature_names);
    }
    return out.str();
}

}  // namespace fairmiss
