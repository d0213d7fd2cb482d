#include "fairmiss/ensemble.hpp"

#include <sstream>

#include "fairmiss/error.hpp"

namespace fairmiss {

std::string InterventionSpec::name() const {
    switch (kind) {
        case Kind::none: return "none";
        case Kind::penalty: return "penalty";
        case Kind::postprocess: return "postprocess";
    }
    return "none";
}

InterventionSpec::Kind InterventionSpec::parse_kind(const std::string& name) {
    if (name == "none") return Kind::none;
    if (name == "penalty") return Kind::penalty;
    if (name == "postprocess") return Kind::postprocess;
    throw ParameterError("unknown intervention '" + name + "'");
}

double FairModel::score(const Sample& s) const { return model.score(encoder.encode(s)); }

double FairModel::positive_probability(const Sample& s) const {
    const double sc = score(s);
    if (!correction) return sc;
    return correction->positive_probability(s.sensitive, sc >= model.threshold ? 1 : 0);
}

int FairModel::predict(const Sample& s, std::mt19937_64& rng) const {
    const int base = score(s) >= model.threshold ? 1 : 0;
    return correction ? correction->apply(s.sensitive, base, rng) : base;
}

std::string FairModel::serialize(const std::vector<std::string>& feature_names) const {
    std::ostringstream out;
    out << "encoder " << to_string(encoder.kind()) << " imputer " << encoder.imputer().spec().name() << "\n";
    std::vector<std::string> labels;
    for (const auto& t : encoder.tags()) labels.push_back(t.label(feature_names));
    out << fairmiss::serialize(model, labels);
    if (correction) {
        out.precision(17);
        for (std::size_t g = 0; g < correction->groups.size(); ++g)
            out << "flip group " << correction->groups[g] << " " << correction->flip[g][0] << " "
                << correction->flip[g][1] << "\n";
    }
    return out.str();
}

FairModel train_fair_model(FeatureEncoder encoder, const Dataset& train, const InterventionSpec& spec) {
    encoder.fit(train);
    const auto enc = encoder.encode(train);
    FairModel out;
    switch (spec.kind) {
        case InterventionSpec::Kind::none:
            out.model = train_logreg(enc, spec.penalty.optimizer);
            break;
        case InterventionSpec::Kind::penalty:
            out.model = train_fair_penalty(enc, spec.penalty);
            break;
        case InterventionSpec::Kind::postprocess: {
            out.model = train_logreg(enc, spec.penalty.optimizer);
            out.correction = postprocess_eqodds(out.model.scores(enc), train, spec.epsilon);
            break;
        }
    }
    out.encoder = std::move(encoder);
    return out;
}

EnsembleMode parse_ensemble_mode(const std::string& name) {
    if (name == "random-pick") return EnsembleMode::random_pick;
    if (name == "score-average") return EnsembleMode::score_average;
    throw ParameterError("unknown ensemble mode '" + name + "'");
}

std::string to_string(EnsembleMode mode) {
    return mode == EnsembleMode::random_pick ? "random-pick" : "score-average";
}

FairEnsemble fair_miss_bag(const Dataset& train, const BagOptions& options, std::uint64_t seed) {
    if (options.bags < 1) throw ParameterError("FairMissBag needs at least one bag");
    FairEnsemble ens;
    ens.mode = options.mode;
    for (std::size_t b = 0; b < options.bags; ++b) {
        const auto bag = fair_resample(train, seed + b);
        ens.members.push_back(
            train_fair_model(FeatureEncoder(options.encoder, options.imputer), bag, options.intervention));
    }
    return ens;
}

EnsemblePrediction ensemble_predict(const FairEnsemble& ens, const Sample& sample, std::uint64_t seed) {
    if (ens.members.empty()) throw StateError("ensemble has no members");
    std::mt19937_64 rng(seed);
    EnsemblePrediction out;
    if (ens.mode == EnsembleMode::random_pick) {
        std::uniform_int_distribution<std::size_t> pick(0, ens.members.size() - 1);
        const auto& m = ens.members[pick(rng)];
        out.score = m.positive_probability(sample);
        out.label = m.predict(sample, rng);
        return out;
    }
    double sum = 0.0;
    for (const auto& m : ens.members) sum += m.positive_probability(sample);
    out.score = sum / static_cast<double>(ens.members.size());
    out.label = out.score >= 0.5 ? 1 : 0;
    return out;
}

std::vector<int> ensemble_predict_labels(const FairEnsemble& ens, const Dataset& ds, std::uint64_t seed) {
    std::vector<int> out(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) out[i] = ensemble_predict(ens, ds[i], seed + i).label;
    return out;
}

}  // namespace fairmiss
