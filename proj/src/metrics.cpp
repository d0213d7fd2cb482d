#include "fairmiss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairmiss/error.hpp"

namespace fairmiss {

GroupRates group_rates(std::span<const int> predictions, const Dataset& ds) {
    if (predictions.size() != ds.size()) throw DataError("prediction count does not match dataset size");
    GroupRates out;
    for (int g : ds.groups()) {
        std::size_t n[2] = {0, 0}, pos[2] = {0, 0};
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (ds[i].sensitive != g) continue;
            const auto y = static_cast<std::size_t>(ds[i].label);
            ++n[y];
            pos[y] += predictions[i] == 1 ? 1 : 0;
        }
        for (int y = 0; y <= 1; ++y)
            if (n[y] == 0) throw DataError("cell " + to_string(CellKey{g, y}) + " is empty; rates undefined");
        GroupRate r;
        r.group = g;
        r.negatives = n[0];
        r.positives = n[1];
        r.fpr = static_cast<double>(pos[0]) / static_cast<double>(n[0]);
        r.tnr = 1.0 - r.fpr;
        r.tpr = static_cast<double>(pos[1]) / static_cast<double>(n[1]);
        r.fnr = 1.0 - r.tpr;
        out.groups.push_back(r);
    }
    return out;
}

double accuracy(std::span<const int> predictions, const Dataset& ds) {
    if (predictions.size() != ds.size()) throw DataError("prediction count does not match dataset size");
    if (ds.empty()) throw DataError("accuracy of an empty dataset is undefined");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) correct += predictions[i] == ds[i].label ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(ds.size());
}

DisparityKind parse_disparity(const std::string& name) {
    if (name == "fnr-diff") return DisparityKind::fnr_diff;
    if (name == "fpr-diff") return DisparityKind::fpr_diff;
    if (name == "meo") return DisparityKind::meo;
    if (name == "eqodds-max") return DisparityKind::eqodds_max;
    throw ParameterError("unknown disparity '" + name + "'");
}

std::string to_string(DisparityKind kind) {
    switch (kind) {
        case DisparityKind::fnr_diff: return "fnr-diff";
        case DisparityKind::fpr_diff: return "fpr-diff";
        case DisparityKind::meo: return "meo";
        case DisparityKind::eqodds_max: return "eqodds-max";
    }
    return "meo";
}

namespace {

template <typename F>
double max_gap(const GroupRates& rates, F field) {
    double gap = 0.0;
    for (const auto& a : rates.groups)
        for (const auto& b : rates.groups) gap = std::max(gap, std::abs(field(a) - field(b)));
    return gap;
}

}  // namespace

double disparity(const GroupRates& rates, DisparityKind kind) {
    if (rates.groups.size() < 2) throw DataError("disparity needs at least two groups");
    const double fnr = max_gap(rates, [](const GroupRate& r) { return r.fnr; });
    const double fpr = max_gap(rates, [](const GroupRate& r) { return r.fpr; });
    switch (kind) {
        case DisparityKind::fnr_diff: return fnr;
        case DisparityKind::fpr_diff: return fpr;
        case DisparityKind::meo: return 0.5 * (fnr + fpr);
        case DisparityKind::eqodds_max: {
            double gap = 0.0;
            gap = std::max(gap, max_gap(rates, [](const GroupRate& r) { return r.tpr; }));
            gap = std::max(gap, max_gap(rates, [](const GroupRate& r) { return r.fnr; }));
            gap = std::max(gap, max_gap(rates, [](const GroupRate& r) { return r.fpr; }));
            gap = std::max(gap, max_gap(rates, [](const GroupRate& r) { return r.tnr; }));
            return gap;
        }
    }
    return 0.0;
}

GroupRates uniform_mixture(std::span<const GroupRates> members) {
    if (members.empty()) throw ParameterError("uniform_mixture needs at least one member");
    GroupRates out = members.front();
    for (auto& g : out.groups) g.fpr = g.fnr = g.tpr = g.tnr = 0.0;
    const double w = 1.0 / static_cast<double>(members.size());
    for (const auto& m : members) {
        if (m.groups.size() != out.groups.size()) throw ParameterError("uniform_mixture: members disagree on groups");
        for (std::size_t k = 0; k < out.groups.size(); ++k) {
            const auto& g = m.groups[k];
            if (g.group != out.groups[k].group) throw ParameterError("uniform_mixture: members disagree on groups");
            out.groups[k].fpr += w * g.fpr;
            out.groups[k].fnr += w * g.fnr;
            out.groups[k].tpr += w * g.tpr;
            out.groups[k].tnr += w * g.tnr;
        }
    }
    return out;
}

std::vector<TradeoffPoint> pareto_frontier(const std::vector<TradeoffPoint>& points) {
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Descending accuracy, then ascending disparity: a point survives iff its
    // disparity is strictly below everything seen so far.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].accuracy != points[b].accuracy) return points[a].accuracy > points[b].accuracy;
        return points[a].disparity < points[b].disparity;
    });
    std::vector<TradeoffPoint> out;
    double best_disparity = std::numeric_limits<double>::infinity();
    for (auto i : order) {
        if (points[i].disparity < best_disparity) {
            out.push_back(points[i]);
            best_disparity = points[i].disparity;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace fairmiss
