#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fairmiss/dataset.hpp"
#include "fairmiss/logistic.hpp"

namespace fairmiss {

struct ClusterOptions {
    std::size_t k_min = 1;
    double alpha = 1.0;  // upper bound on every group's share of a child
    double beta = 0.0;   // lower bound on every group's share of a child
    OptimizerSettings loss_optimizer{1e-4, 5000, 1e-6, 1.0};
    // When > 0, child models are fit on (1 - f) of the training rows and the
    // split loss is measured on the held-out f.
    double validation_fraction = 0.0;
    std::uint64_t seed = 0;
};

struct ClusterNode {
    int split_feature = -1;  // -1 for leaves
    int child_missing_0 = -1;
    int child_missing_1 = -1;
    int leaf = -1;           // cluster id for leaves
    std::vector<std::size_t> rows;  // training rows routed here (empty after parse)
    double loss = 0.0;              // minimized loss of the rows (0 after parse)

    bool is_leaf() const { return split_feature < 0; }
};

// One accepted split, in the order they were accepted.
struct SplitRecord {
    int node = 0;
    std::size_t feature = 0;
    double parent_loss = 0.0;
    double child_loss_0 = 0.0;
    double child_loss_1 = 0.0;
};

// Per-leaf constraint record.
struct LeafRecord {
    std::size_t size = 0;
    std::vector<std::pair<int, double>> group_fractions;
};

// Binary tree over missing patterns. Node 0 is the root. Internal nodes route on
// whether their feature is missing; every pattern reaches exactly one leaf.
class ClusterPartition {
public:
    ClusterPartition() = default;

    std::size_t cluster_count() const { return leaves_.size(); }
    const std::vector<ClusterNode>& nodes() const { return nodes_; }
    const std::vector<SplitRecord>& splits() const { return splits_; }
    const std::vector<LeafRecord>& leaf_records() const { return leaf_records_; }
    // Training rows of cluster q.
    const std::vector<std::size_t>& cluster_rows(std::size_t q) const;
    std::size_t dimension() const { return dim_; }

    int assign(const MissingMask& mask) const;

    // One node per line: "<id> split <feature> <child_if_observed> <child_if_missing>"
    // or "<id> leaf <cluster>", preceded by "dimension <d>".
    std::string serialize() const;
    static ClusterPartition parse(const std::string& text);

private:
    friend ClusterPartition cluster_missing_patterns(const Dataset&, const ClusterOptions&);

    std::size_t dim_ = 0;
    std::vector<ClusterNode> nodes_;
    std::vector<int> leaves_;  // node id of each cluster
    std::vector<SplitRecord> splits_;
    std::vector<LeafRecord> leaf_records_;
};

// Recursive partitioning of missing patterns. Clusters are processed in FIFO
// order; a cluster is split on the lowest-index feature minimizing the summed
// children loss among features meeting the size and representation bounds, and
// only when that sum is strictly below the cluster's own loss.
ClusterPartition cluster_missing_patterns(const Dataset& train, const ClusterOptions& options);

inline int assign_cluster(const ClusterPartition& part, const MissingMask& mask) { return part.assign(mask); }

}  // namespace fairmiss
