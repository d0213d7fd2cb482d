#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairmiss/cluster.hpp"
#include "fairmiss/dataset.hpp"
#include "fairmiss/ensemble.hpp"
#include "fairmiss/impute.hpp"
#include "fairmiss/metrics.hpp"
#include "fairmiss/missingness.hpp"

namespace fairmiss {

// Sectioned `key = value` text: `[section]` headers, `#` comments, repeated
// keys allowed and kept in order.
class ConfigText {
public:
    static ConfigText parse(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    // Last value of a key; throws ParseError when absent.
    const std::string& get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key, const std::string& fallback) const;
    std::vector<std::string> all(const std::string& section, const std::string& key) const;
    std::vector<std::string> sections() const;
    std::vector<std::string> keys(const std::string& section) const;

private:
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> entries_;
};

enum class Method { impute_then_classify, indicators, affine, clustering, fairmissbag };

Method parse_method(const std::string& name);
std::string to_string(Method m);

struct DataConfig {
    enum class Source { csv, synthetic, gaussian, theorem1 };
    Source source = Source::synthetic;
    std::filesystem::path csv;
    std::filesystem::path schema;
    std::size_t n = 2000;                 // gaussian / theorem1 sample mode
    Theorem1Distribution theorem1{{0.25, 0.25}, {0.5, 0.5}};
    bool theorem1_exact = true;           // oracle report instead of training
    std::vector<double> theorem1_epsilons{0.0};
    bool scale = true;
    BalanceMode balance = BalanceMode::none;
};

struct ExperimentConfig {
    DataConfig data;
    std::optional<MissingnessSpec> missingness;
    bool inject_before_split = false;

    std::vector<Method> methods{Method::impute_then_classify};
    ImputerSpec imputer;
    ClusterOptions cluster;
    std::vector<std::size_t> k_min_grid{1};
    std::size_t bags = 10;
    EnsembleMode ensemble_mode = EnsembleMode::random_pick;

    InterventionSpec intervention;        // base settings; the grid varies tau or epsilon
    std::vector<double> intervention_grid{0.0};

    std::size_t repeats = 10;
    double test_fraction = 0.3;
    std::uint64_t seed = 0;
    DisparityKind pareto_disparity = DisparityKind::meo;

    std::filesystem::path output_dir = "out";

    // Relative paths in the file resolve against `base_dir`.
    static ExperimentConfig from_text(const ConfigText& text, const std::filesystem::path& base_dir = {});
    static ExperimentConfig load(const std::filesystem::path& path);

    // Structural checks: files exist, grids non-empty, repeats >= 1, fraction in
    // (0, 1). Throws ParameterError.
    void validate() const;
};

// Default intervention grids: tau {0.01, 0.1, 1, 10, 100}; postprocess epsilon
// {0, 0.001, 0.01, 0.1, 0.5}; no intervention {0}.
std::vector<double> default_grid(InterventionSpec::Kind kind);

}  // namespace fairmiss
