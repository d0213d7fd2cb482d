#include "fairmiss/information.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

#include "fairmiss/error.hpp"

namespace fairmiss {

namespace {

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// H(Y | T) from cells of (n_t0, n_t1) masses; caller fixes the order.
double conditional_entropy_sorted(const JointTY& joint) {
    double total = 0.0;
    for (const auto& c : joint) total += c[0] + c[1];
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (const auto& c : joint) {
        const double pt = (c[0] + c[1]) / total;
        if (pt <= 0.0) continue;
        for (double m : c) {
            const double pty = m / total;
            if (pty > 0.0) h -= pty * std::log2(pty / pt);
        }
    }
    return std::max(0.0, h);
}

double label_entropy(const JointTY& joint) {
    double n0 = 0.0, n1 = 0.0;
    for (const auto& c : joint) {
        n0 += c[0];
        n1 += c[1];
    }
    const double total = n0 + n1;
    if (total <= 0.0) return 0.0;
    return -(xlog2x(n0 / total) + xlog2x(n1 / total));
}

JointTY count_cells(std::span<const int> y, std::span<const Tuple> tuples) {
    if (y.size() != tuples.size()) throw DataError("label and tuple columns differ in length");
    std::map<Tuple, std::array<double, 2>> cells;
    for (std::size_t i = 0; i < y.size(); ++i) cells[tuples[i]][static_cast<std::size_t>(y[i])] += 1.0;
    JointTY joint;
    joint.reserve(cells.size());
    for (const auto& [t, c] : cells) joint.push_back(c);
    std::sort(joint.begin(), joint.end());
    return joint;
}

}  // namespace

double binary_entropy(double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw ParameterError("binary entropy needs a in [0, 1]");
    return -(xlog2x(a) + xlog2x(1.0 - a));
}

double conditional_entropy(const JointTY& joint) {
    auto sorted = joint;
    std::sort(sorted.begin(), sorted.end());
    return conditional_entropy_sorted(sorted);
}

double mutual_information(const JointTY& joint) {
    auto sorted = joint;
    std::sort(sorted.begin(), sorted.end());
    return std::max(0.0, label_entropy(sorted) - conditional_entropy_sorted(sorted));
}

double conditional_entropy(std::span<const int> y, std::span<const Tuple> tuples) {
    return conditional_entropy_sorted(count_cells(y, tuples));
}

double mutual_information(std::span<const int> y, std::span<const Tuple> tuples) {
    const auto joint = count_cells(y, tuples);
    return std::max(0.0, label_entropy(joint) - conditional_entropy_sorted(joint));
}

std::vector<Tuple> feature_tuples(const Dataset& ds, TupleView view) {
    constexpr long long na = std::numeric_limits<long long>::min();
    std::vector<Tuple> out;
    out.reserve(ds.size());
    for (const auto& s : ds.samples()) {
        Tuple t;
        for (const auto& c : s.features) {
            switch (view) {
                case TupleView::raw: t.push_back(c ? std::bit_cast<long long>(*c) : na); break;
                case TupleView::zero_imputed:
                case TupleView::imputed_and_mask:
                    t.push_back(std::bit_cast<long long>(c ? *c : 0.0));
                    break;
            }
        }
        if (view == TupleView::imputed_and_mask)
            for (const auto& c : s.features) t.push_back(c ? 0 : 1);
        out.push_back(std::move(t));
    }
    return out;
}

double mutual_info_MY(const Dataset& ds) {
    if (ds.empty()) throw DataError("mutual information of an empty dataset is undefined");
    std::vector<Tuple> masks;
    masks.reserve(ds.size());
    for (const auto& s : ds.samples()) {
        const auto m = s.mask();
        masks.emplace_back(m.bits.begin(), m.bits.end());
    }
    const auto y = ds.labels();
    return mutual_information(y, masks);
}

double mutual_info_MY(const DiscreteTable& table, std::size_t na_index) {
    JointTY joint(2, {0.0, 0.0});
    for (std::size_t s = 0; s < table.groups(); ++s)
        for (std::size_t x = 0; x < table.domain_size(); ++x)
            for (int y = 0; y <= 1; ++y)
                joint[x == na_index ? 1 : 0][static_cast<std::size_t>(y)] += table.at(s, x, y);
    return mutual_information(joint);
}

}  // namespace fairmiss
