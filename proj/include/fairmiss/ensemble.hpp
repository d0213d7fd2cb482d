#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fairmiss/encode.hpp"
#include "fairmiss/logistic.hpp"
#include "fairmiss/postprocess.hpp"

namespace fairmiss {

// A fairness intervention applied to an encoded training set.
struct InterventionSpec {
    enum class Kind { none, penalty, postprocess };
    Kind kind = Kind::none;
    PenaltyConfig penalty;   // tau and constraint used by `penalty`; optimizer used by all
    double epsilon = 0.0;    // used by `postprocess`

    std::string name() const;
    static Kind parse_kind(const std::string& name);
};

// An encoder, its trained linear model and an optional randomized correction.
struct FairModel {
    FeatureEncoder encoder;
    LinearModel model;
    std::optional<PostprocessRates> correction;

    double score(const Sample& s) const;
    // Pr(prediction = 1); equals score when there is no correction.
    double positive_probability(const Sample& s) const;
    int predict(const Sample& s, std::mt19937_64& rng) const;

    std::string serialize(const std::vector<std::string>& feature_names) const;
};

// Fits `encoder` on train, then the intervention on the encoded rows.
FairModel train_fair_model(FeatureEncoder encoder, const Dataset& train, const InterventionSpec& spec);

enum class EnsembleMode { random_pick, score_average };

EnsembleMode parse_ensemble_mode(const std::string& name);
std::string to_string(EnsembleMode mode);

struct FairEnsemble {
    std::vector<FairModel> members;
    EnsembleMode mode = EnsembleMode::random_pick;

    std::size_t size() const { return members.size(); }
};

struct BagOptions {
    std::size_t bags = 10;
    InterventionSpec intervention;
    ImputerSpec imputer;
    EncoderKind encoder = EncoderKind::indicators;
    EnsembleMode mode = EnsembleMode::random_pick;
};

// Bag b resamples every (s, y) cell with seed + b, fits the imputer and the
// encoder on that bag alone, and trains the intervention on it.
FairEnsemble fair_miss_bag(const Dataset& train, const BagOptions& options, std::uint64_t seed);

struct EnsemblePrediction {
    int label = 0;
    double score = 0.0;  // mean member probability (score_average) or the picked member's
};

// random_pick draws one member uniformly with `seed` and returns its label;
// score_average returns the mean of member probabilities thresholded at 0.5.
EnsemblePrediction ensemble_predict(const FairEnsemble& ens, const Sample& sample, std::uint64_t seed);

// Row i uses seed + i.
std::vector<int> ensemble_predict_labels(const FairEnsemble& ens, const Dataset& ds, std::uint64_t seed);

}  // namespace fairmiss
