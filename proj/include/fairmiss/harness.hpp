#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fairmiss/config.hpp"
#include "fairmiss/pipeline.hpp"

namespace fairmiss {

struct GridPoint {
    std::size_t id = 0;              // position within its method's grid
    std::string hyperparameters;     // "name=value;name=value"
    PipelineSpec spec;
};

// Grid points of one method: the intervention grid, crossed with the k_min
// grid for clustering.
std::vector<GridPoint> build_grid(const ExperimentConfig& cfg, Method method);

// Metrics of one (method, grid point, repeat).
struct RepeatRecord {
    std::string method;
    std::size_t grid_point = 0;
    std::string hyperparameters;
    std::size_t repeat = 0;
    std::map<std::string, double> metrics;
};

struct FailureRecord {
    std::string method;
    std::size_t grid_point = 0;
    std::size_t repeat = 0;
    std::string error;
};

struct SummaryRow {
    std::string method;
    std::size_t grid_point = 0;
    std::string hyperparameters;
    std::string metric;
    double mean = 0.0;
    double std_error = 0.0;
};

struct MeanError {
    double mean = 0.0;
    double std_error = 0.0;  // sample sd / sqrt(n); 0 when n = 1
};

MeanError mean_and_error(std::span<const double> values);

// Mean and standard error of every metric per (method, grid point). Throws
// ParameterError when records of one grid point disagree on hyperparameters or
// metric names, or when a (method, grid point, repeat) appears twice.
std::vector<SummaryRow> sweep_and_aggregate(const std::vector<RepeatRecord>& records);

struct RunResult {
    std::vector<RepeatRecord> records;    // sorted
    std::vector<FailureRecord> failures;  // sorted
    std::vector<SummaryRow> summary;
    std::vector<SummaryRow> pareto;       // summary rows of frontier grid points
    bool all_grid_points_succeeded = true;
};

RunResult run_experiment(const ExperimentConfig& cfg);

// raw.csv, summary.csv, pareto.csv and failures.csv under `dir`.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

std::string raw_csv(const RunResult& result);
std::string summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace fairmiss
