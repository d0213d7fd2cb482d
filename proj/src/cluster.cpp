#include "fairmiss/cluster.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "fairmiss/error.hpp"
#include "logging.hpp"
#include "text_util.hpp"

namespace fairmiss {

namespace {

EncodedDataset take_rows(const EncodedDataset& enc, const std::vector<std::size_t>& rows) {
    EncodedDataset out;
    out.rows = rows.size();
    out.cols = enc.cols;
    out.tags = enc.tags;
    out.values.reserve(rows.size() * enc.cols);
    for (auto r : rows) {
        auto row = enc.row(r);
        out.values.insert(out.values.end(), row.begin(), row.end());
        out.labels.push_back(enc.labels[r]);
        out.sensitive.push_back(enc.sensitive[r]);
    }
    return out;
}

// Minimized loss of a row set: on the rows themselves, or fit on the fitting
// part and measured on the validation part.
class LossEvaluator {
public:
    LossEvaluator(const Dataset& train, const ClusterOptions& opt)
        : design_(encode_zero_imputed(train)), opt_(opt), is_validation_(train.size(), false) {
        if (opt.validation_fraction > 0.0) {
            if (opt.validation_fraction >= 1.0)
                throw ParameterError("validation_fraction must lie in [0, 1)");
            std::vector<std::size_t> order(train.size());
            std::iota(order.begin(), order.end(), 0);
            std::mt19937_64 rng(opt.seed);
            std::shuffle(order.begin(), order.end(), rng);
            const auto n_val = static_cast<std::size_t>(opt.validation_fraction * static_cast<double>(train.size()));
            for (std::size_t i = 0; i < n_val; ++i) is_validation_[order[i]] = true;
        }
    }

    double operator()(const std::vector<std::size_t>& rows) const {
        if (opt_.validation_fraction <= 0.0)
            return minimized_total_loss(take_rows(design_, rows), opt_.loss_optimizer);
        std::vector<std::size_t> fit, val;
        for (auto r : rows) (is_validation_[r] ? val : fit).push_back(r);
        if (fit.empty() || val.empty()) return 0.0;
        LinearModel model;
        minimized_total_loss(take_rows(design_, fit), opt_.loss_optimizer, &model);
        return total_loss(model, take_rows(design_, val), 0.0);
    }

private:
    EncodedDataset design_;
    const ClusterOptions& opt_;
    std::vector<bool> is_validation_;
};

LeafRecord describe(const Dataset& train, const std::vector<std::size_t>& rows) {
    LeafRecord rec;
    rec.size = rows.size();
    for (int g : train.groups()) {
        std::size_t n = 0;
        for (auto r : rows) n += train[r].sensitive == g ? 1 : 0;
        rec.group_fractions.emplace_back(g, rows.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(rows.size()));
    }
    return rec;
}

bool admissible(const Dataset& train, const std::vector<std::size_t>& rows, const ClusterOptions& opt) {
    if (rows.size() < opt.k_min) return false;
    for (const auto& [g, frac] : describe(train, rows).group_fractions)
        if (frac < opt.beta || frac > opt.alpha) return false;
    return true;
}

}  // namespace

const std::vector<std::size_t>& ClusterPartition::cluster_rows(std::size_t q) const {
    return nodes_.at(static_cast<std::size_t>(leaves_.at(q))).rows;
}

int ClusterPartition::assign(const MissingMask& mask) const {
    if (nodes_.empty()) throw StateError("cluster partition is empty");
    std::size_t node = 0;
    while (!nodes_[node].is_leaf()) {
        const auto& n = nodes_[node];
        const auto j = static_cast<std::size_t>(n.split_feature);
        const bool missing = j < mask.size() && mask.missing(j);
        node = static_cast<std::size_t>(missing ? n.child_missing_1 : n.child_missing_0);
    }
    return nodes_[node].leaf;
}

std::string ClusterPartition::serialize() const {
    std::ostringstream out;
    out << "dimension " << dim_ << "\n";
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const auto& n = nodes_[id];
        if (n.is_leaf()) out << id << " leaf " << n.leaf << "\n";
        else out << id << " split " << n.split_feature << " " << n.child_missing_0 << " " << n.child_missing_1 << "\n";
    }
    return out.str();
}

ClusterPartition ClusterPartition::parse(const std::string& text) {
    ClusterPartition part;
    std::istringstream in(text);
    std::string line;
    std::map<int, int> leaf_nodes;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_comment(line);
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string first, kind;
        fields >> first;
        if (first == "dimension") {
            fields >> part.dim_;
            continue;
        }
        auto id = detail::parse_int(first);
        fields >> kind;
        if (!id || *id != static_cast<int>(part.nodes_.size()))
            throw ParseError("partition line " + std::to_string(line_no) + ": node ids must be consecutive from 0");
        ClusterNode node;
        if (kind == "leaf") {
            if (!(fields >> node.leaf)) throw ParseError("partition line " + std::to_string(line_no) + ": bad leaf");
            leaf_nodes[node.leaf] = *id;
        } else if (kind == "split") {
            if (!(fields >> node.split_feature >> node.child_missing_0 >> node.child_missing_1))
                throw ParseError("partition line " + std::to_string(line_no) + ": bad split");
        } else {
            throw ParseError("partition line " + std::to_string(line_no) + ": expected 'leaf' or 'split'");
        }
        part.nodes_.push_back(std::move(node));
    }
    const auto n = static_cast<int>(part.nodes_.size());
    for (const auto& node : part.nodes_)
        if (!node.is_leaf() && (node.child_missing_0 <= 0 || node.child_missing_0 >= n ||
                                node.child_missing_1 <= 0 || node.child_missing_1 >= n))
            throw ParseError("partition: child id out of range");
    for (int q = 0; q < static_cast<int>(leaf_nodes.size()); ++q) {
        auto it = leaf_nodes.find(q);
        if (it == leaf_nodes.end()) throw ParseError("partition: cluster ids must be consecutive from 0");
        part.leaves_.push_back(it->second);
    }
    return part;
}

ClusterPartition cluster_missing_patterns(const Dataset& train, const ClusterOptions& opt) {
    if (train.empty()) throw DataError("cannot cluster an empty training set");
    const double share = 1.0 / static_cast<double>(train.groups().size());
    if (!(opt.beta >= 0.0 && opt.beta <= share + 1e-12 && share <= opt.alpha + 1e-12 && opt.alpha <= 1.0))
        throw ParameterError("bounded representation needs 0 <= beta <= 1/|S| <= alpha <= 1");
    if (opt.k_min < 1) throw ParameterError("minimum cluster size must be >= 1");

    const LossEvaluator loss(train, opt);
    const auto masks = train.masks();
    const auto d = train.dimension();

    ClusterPartition part;
    part.dim_ = d;
    ClusterNode root;
    root.rows.resize(train.size());
    std::iota(root.rows.begin(), root.rows.end(), 0);
    part.nodes_.push_back(std::move(root));

    std::vector<bool> loss_known(1, false);
    std::deque<int> pending{0};
    while (!pending.empty()) {
        const int id = pending.front();
        pending.pop_front();
        const auto rows = part.nodes_[static_cast<std::size_t>(id)].rows;

        struct Candidate { std::size_t feature; std::vector<std::size_t> r0, r1; };
        std::vector<Candidate> admissible_splits;
        for (std::size_t j = 0; j < d; ++j) {
            Candidate c{j, {}, {}};
            for (auto r : rows) (masks[r].missing(j) ? c.r1 : c.r0).push_back(r);
            if (admissible(train, c.r0, opt) && admissible(train, c.r1, opt))
                admissible_splits.push_back(std::move(c));
        }

        auto make_leaf = [&] {
            auto& node = part.nodes_[static_cast<std::size_t>(id)];
            node.leaf = static_cast<int>(part.leaves_.size());
            part.leaves_.push_back(id);
            part.leaf_records_.push_back(describe(train, node.rows));
        };
        if (admissible_splits.empty()) {
            make_leaf();
            continue;
        }

        if (!loss_known[static_cast<std::size_t>(id)]) {
            part.nodes_[static_cast<std::size_t>(id)].loss = loss(rows);
            loss_known[static_cast<std::size_t>(id)] = true;
        }
        const double own = part.nodes_[static_cast<std::size_t>(id)].loss;

        const Candidate* best = nullptr;
        double best_l0 = 0.0, best_l1 = 0.0;
        for (const auto& c : admissible_splits) {
            const double l0 = loss(c.r0), l1 = loss(c.r1);
            if (!best || l0 + l1 < best_l0 + best_l1) {
                best = &c;
                best_l0 = l0;
                best_l1 = l1;
            }
        }
        log::debug("cluster node {}: own loss {:.6g}, best split on feature {} gives {:.6g}", id, own,
                   best->feature, best_l0 + best_l1);
        if (!(best_l0 + best_l1 < own)) {
            make_leaf();
            continue;
        }

        const int c0 = static_cast<int>(part.nodes_.size());
        const int c1 = c0 + 1;
        ClusterNode n0, n1;
        n0.rows = best->r0;
        n0.loss = best_l0;
        n1.rows = best->r1;
        n1.loss = best_l1;
        part.nodes_.push_back(std::move(n0));
        part.nodes_.push_back(std::move(n1));
        loss_known.push_back(true);
        loss_known.push_back(true);
        auto& node = part.nodes_[static_cast<std::size_t>(id)];
        node.split_feature = static_cast<int>(best->feature);
        node.child_missing_0 = c0;
        node.child_missing_1 = c1;
        part.splits_.push_back({id, best->feature, own, best_l0, best_l1});
        pending.push_back(c0);
        pending.push_back(c1);
    }
    return part;
}

}  // namespace fairmiss
