#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fairmiss/cluster.hpp"
#include "fairmiss/config.hpp"
#include "fairmiss/ensemble.hpp"

namespace fairmiss {

// Everything needed to train one method at one grid point.
struct PipelineSpec {
    Method method = Method::impute_then_classify;
    ImputerSpec imputer;
    InterventionSpec intervention;
    ClusterOptions cluster;
    std::size_t bags = 10;
    EnsembleMode ensemble_mode = EnsembleMode::random_pick;
};

// A method trained on one training set. Prediction is randomized only through
// the post-processor and the ensemble pick, both driven by the seed.
class FittedPipeline {
public:
    // Row i of `ds` uses seed + i.
    std::vector<int> predict(const Dataset& ds, std::uint64_t seed) const;
    int predict(const Sample& s, std::uint64_t seed) const;

    Method method() const { return method_; }
    // Present for clustering only.
    const ClusterPartition* partition() const { return partition_.get(); }
    const std::vector<FairModel>& models() const { return models_; }
    const FairEnsemble* ensemble() const { return ensemble_.get(); }

    std::string serialize(const std::vector<std::string>& feature_names) const;

private:
    friend FittedPipeline fit_pipeline(const PipelineSpec&, const Dataset&, std::uint64_t);

    Method method_ = Method::impute_then_classify;
    std::vector<FairModel> models_;  // one, or one per cluster
    std::shared_ptr<const ClusterPartition> partition_;
    std::shared_ptr<const FairEnsemble> ensemble_;
};

// impute-then-classify, indicators and affine train one model on the encoded
// training set. clustering partitions the missing patterns and trains one model
// per cluster on its zero-imputed rows. fairmissbag builds a bagged ensemble.
FittedPipeline fit_pipeline(const PipelineSpec& spec, const Dataset& train, std::uint64_t seed);

}  // namespace fairmiss
