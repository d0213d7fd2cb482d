#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairmiss/dataset.hpp"
#include "fairmiss/table.hpp"

namespace fairmiss {

enum class Mechanism { mcar, mar, mnar };

Mechanism parse_mechanism(const std::string& name);
std::string to_string(Mechanism m);

// The binary quantity a missingness probability depends on. Evaluated on the
// values present before any masking of the current injection.
struct Indicator {
    enum class Kind {
        none,       // MCAR: no dependence
        column,     // I = 1 iff the feature value is non-zero
        threshold,  // I = 1 iff value < threshold (or > when `greater`)
        label,      // I = y
        sensitive,  // I = 1 iff the sensitive id is non-zero
    };
    Kind kind = Kind::none;
    std::string column;
    double threshold = 0.0;
    bool greater = false;

    std::string to_string() const;
};

struct MissingnessEntry {
    std::string target;
    Indicator indicator;
    double p0 = 0.0;  // Pr(NA | I = 0)
    double p1 = 0.0;  // Pr(NA | I = 1)
};

struct MissingnessSpec {
    Mechanism mechanism = Mechanism::mcar;
    std::vector<MissingnessEntry> entries;

    // Checks mechanism-specific rules against a dataset's columns. Throws
    // ParameterError for invalid probabilities or mechanism mismatches and
    // SchemaError for unknown columns.
    void validate(const Dataset& ds) const;

    // `target | indicator | p0 | p1`, where indicator is one of `none`, `label`,
    // `sensitive`, `<column>`, `<column> < t`, `<column> > t`.
    static MissingnessEntry parse_entry(const std::string& text);
    std::string entry_text(const MissingnessEntry& e) const;
};

// Independently hides each targeted cell with probability p0 or p1 according to
// the row's indicator. Observed values are never altered, only hidden.
Dataset inject_missing(const Dataset& ds, const MissingnessSpec& spec, std::uint64_t seed);

// Two-feature Gaussian dataset with 2400 rows: 1600 complete rows (400 per
// (y, s) cell, means (+-3, +-3), covariance 2I) and 800 rows with X2 hidden and
// X1 ~ N(+-3, variance 3).
Dataset gen_synthetic(std::uint64_t seed);

// Five-feature complete Gaussian dataset with weak per-feature label signal;
// used as the base for missingness experiments.
Dataset gen_gaussian_benchmark(std::size_t n, std::uint64_t seed);

// Parameters of the single-feature construction in which the missing pattern
// determines the label.
struct Theorem1Distribution {
    std::vector<double> alpha_s;  // per-group Pr(Y = 1, X = NA | S = s)
    std::vector<double> q_s;      // group priors

    // Mixture alpha = sum_s alpha_s q_s.
    double alpha() const;
    void validate() const;
};

// Exact table over s, x in {"0", "1", "NA"}, y.
DiscreteTable exact_theorem1(const Theorem1Distribution& dist);

// i.i.d. draws from exact_theorem1 as a one-feature Dataset.
Dataset gen_theorem1(const Theorem1Distribution& dist, std::size_t n, std::uint64_t seed);

}  // namespace fairmiss
