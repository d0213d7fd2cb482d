#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fairmiss/dataset.hpp"

namespace testing_support {

using fairmiss::Cell;
using fairmiss::Dataset;
using fairmiss::Sample;

inline Sample row(std::vector<Cell> x, int s, int y) { return Sample{std::move(x), s, y}; }

inline std::vector<std::string> names(std::size_t d) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < d; ++j) out.push_back("f" + std::to_string(j));
    return out;
}

// Random dataset: d features ~ N(0,1) shifted by label, two groups, each cell
// non-empty, each feature NA with probability p_missing.
inline Dataset random_dataset(std::size_t n, std::size_t d, double p_missing, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::bernoulli_distribution miss(p_missing);
    std::vector<Sample> rows;
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        s.sensitive = static_cast<int>(i % 2);
        s.label = static_cast<int>((i / 2) % 2);
        for (std::size_t j = 0; j < d; ++j) {
            const double v = z(rng) + (s.label ? 0.8 : -0.8) + 0.3 * s.sensitive;
            s.features.push_back(miss(rng) ? Cell{} : Cell{v});
        }
        rows.push_back(std::move(s));
    }
    return Dataset(std::move(rows), names(d));
}

}  // namespace testing_support
