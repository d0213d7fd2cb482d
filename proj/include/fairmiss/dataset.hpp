#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairmiss {

// A feature cell; std::nullopt is NA.
using Cell = std::optional<double>;

// Bit j is 1 iff feature j is NA.
struct MissingMask {
    std::vector<std::uint8_t> bits;

    std::size_t size() const { return bits.size(); }
    bool missing(std::size_t j) const { return bits[j] != 0; }
    std::size_t count() const;
    bool operator==(const MissingMask&) const = default;
    auto operator<=>(const MissingMask&) const = default;
};

struct Sample {
    std::vector<Cell> features;
    int sensitive = 0;
    int label = 0;

    MissingMask mask() const;
    bool complete() const;
};

// (sensitive, label) pair used for stratification and fairness cells.
struct CellKey {
    int sensitive = 0;
    int label = 0;
    auto operator<=>(const CellKey&) const = default;
};

std::string to_string(const CellKey& key);

// Immutable table of samples sharing one feature dimension. The group set is
// always exactly the sorted set of sensitive ids present.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Sample> samples, std::vector<std::string> feature_names);

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    std::size_t dimension() const { return feature_names_.size(); }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    const std::vector<Sample>& samples() const { return samples_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<int>& groups() const { return groups_; }

    std::vector<int> labels() const;
    std::vector<int> sensitive() const;
    std::vector<MissingMask> masks() const;

    // Index of a feature by name; throws SchemaError when absent.
    std::size_t feature_index(const std::string& name) const;

    // Row indices of every (s, y) cell over the group set and labels {0, 1};
    // empty cells are present with an empty list.
    std::map<CellKey, std::vector<std::size_t>> cells() const;

    Dataset subset(const std::vector<std::size_t>& rows) const;
    Dataset with_samples(std::vector<Sample> samples) const;

    std::size_t missing_count() const;

private:
    std::vector<Sample> samples_;
    std::vector<std::string> feature_names_;
    std::vector<int> groups_;
};

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

enum class ColumnRole { feature, sensitive, label, ignore };

// Column roles for a CSV file. Sensitive values are either integer ids or, when
// `sensitive_values` is given, looked up by position in that list.
struct Schema {
    std::vector<std::pair<std::string, ColumnRole>> columns;
    std::vector<std::string> sensitive_values;

    // Plain-text key/value file: `column = role` per line, `#` comments, and an
    // optional `@sensitive_values = a, b, ...` line.
    static Schema parse(const std::string& text);
    static Schema load(const std::filesystem::path& path);

    std::string to_text() const;
};

Dataset parse_csv(const std::string& text, const Schema& schema);
Dataset load_csv(const std::filesystem::path& path, const Schema& schema);
std::string to_csv(const Dataset& ds);

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

// Per-feature min/max over observed values.
struct ScaleStats {
    std::vector<double> min;
    std::vector<double> max;
};

ScaleStats fit_scaler(const Dataset& ds);
Dataset apply_scaler(const ScaleStats& stats, const Dataset& ds);

// Min-max scaling to [0, 1] over observed values; constant features map to 0.
Dataset scale_features(const Dataset& ds);

// Stratified by (s, y): each cell contributes round(n_cell * test_fraction)
// rows to the test side. Returns (train, test).
std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

// Index form of split_train_test; each vector is sorted.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(const Dataset& ds, double test_fraction, std::uint64_t seed);

// One round of fair uniform resampling: every (s, y) cell is redrawn with
// replacement to its own size. Cell c uses the stream seeded with seed + c.
Dataset fair_resample(const Dataset& ds, std::uint64_t seed);

enum class BalanceMode { none, group, label_then_group };

// Downsamples so that the chosen strata have equal counts.
Dataset balance(const Dataset& ds, BalanceMode mode, std::uint64_t seed);

}  // namespace fairmiss
