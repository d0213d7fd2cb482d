#include <doctest.h>

#include <random>
#include <set>

#include "fairmiss/cluster.hpp"
#include "fairmiss/encode.hpp"
#include "fairmiss/error.hpp"
#include "fairmiss/missingness.hpp"
#include "helpers.hpp"

using namespace fairmiss;
using testing_support::random_dataset;
using testing_support::row;

namespace {

MissingMask mask_of(std::vector<std::uint8_t> bits) { return MissingMask{std::move(bits)}; }

double sum_leaf_losses(const Dataset& ds, const ClusterPartition& p, const OptimizerSettings& s) {
    double total = 0.0;
    for (std::size_t q = 0; q < p.cluster_count(); ++q)
        total += minimized_total_loss(encode_zero_imputed(ds.subset(p.cluster_rows(q))), s);
    return total;
}

}  // namespace

TEST_CASE("synthetic data splits on the hidden feature into two clusters") {
    const auto ds = gen_synthetic(1);
    ClusterOptions opt;
    const auto part = cluster_missing_patterns(ds, opt);
    REQUIRE(part.cluster_count() == 2);
    REQUIRE(part.splits().size() == 1);
    CHECK(part.splits()[0].feature == 1);
    CHECK(part.splits()[0].child_loss_0 + part.splits()[0].child_loss_1 < part.splits()[0].parent_loss);
    const int observed = part.assign(mask_of({0, 0}));
    const int hidden = part.assign(mask_of({0, 1}));
    CHECK(observed != hidden);
    CHECK(part.cluster_rows(static_cast<std::size_t>(hidden)).size() == 800);
    CHECK(part.cluster_rows(static_cast<std::size_t>(observed)).size() == 1600);
}

TEST_CASE("complete data yields a single cluster") {
    const auto ds = random_dataset(100, 3, 0.0, 4);
    const auto part = cluster_missing_patterns(ds, {});
    CHECK(part.cluster_count() == 1);
    CHECK(part.splits().empty());
    CHECK(part.assign(mask_of({1, 1, 1})) == 0);
    CHECK(part.assign(mask_of({0, 1, 0})) == 0);
}

TEST_CASE("a split that over-represents a group is excluded") {
    // Feature 0 is missing for 19 group-0 rows and 1 group-1 row: the missing
    // child would be 95% group 0.
    std::vector<Sample> rows;
    for (int i = 0; i < 20; ++i) rows.push_back(row({Cell{}, 1.0}, i < 19 ? 0 : 1, i % 2));
    for (int i = 0; i < 40; ++i) rows.push_back(row({i % 2 ? 2.0 : -2.0, 1.0}, i < 21 ? 1 : 0, i % 2));
    Dataset ds(rows, {"a", "b"});
    ClusterOptions loose;
    CHECK(cluster_missing_patterns(ds, loose).cluster_count() == 2);
    ClusterOptions tight;
    tight.alpha = 0.6;
    CHECK(cluster_missing_patterns(ds, tight).cluster_count() == 1);
}

TEST_CASE("k_min blocks small children") {
    const auto ds = gen_synthetic(2);
    ClusterOptions opt;
    opt.k_min = 801;
    CHECK(cluster_missing_patterns(ds, opt).cluster_count() == 1);
    opt.k_min = 800;
    CHECK(cluster_missing_patterns(ds, opt).cluster_count() == 2);
}

TEST_CASE("leaf records respect the representation bounds") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto ds = random_dataset(160, 4, 0.35, seed);
        ClusterOptions opt;
        opt.k_min = 10;
        opt.alpha = 0.7;
        opt.beta = 0.3;
        const auto part = cluster_missing_patterns(ds, opt);
        std::size_t total = 0;
        for (std::size_t q = 0; q < part.cluster_count(); ++q) {
            const auto& rec = part.leaf_records()[q];
            total += rec.size;
            if (part.cluster_count() > 1) {
                CHECK(rec.size >= 10);
                for (const auto& [g, f] : rec.group_fractions) {
                    CHECK(f >= 0.3);
                    CHECK(f <= 0.7);
                }
            }
        }
        CHECK(total == ds.size());
    }
}

TEST_CASE("every accepted split lowers the summed loss") {
    OptimizerSettings s;
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        const auto ds = random_dataset(120, 3, 0.4, seed);
        ClusterOptions opt;
        opt.k_min = 5;
        const auto part = cluster_missing_patterns(ds, opt);
        for (const auto& sp : part.splits()) CHECK(sp.child_loss_0 + sp.child_loss_1 < sp.parent_loss);
        const double root = minimized_total_loss(encode_zero_imputed(ds), s);
        CHECK(sum_leaf_losses(ds, part, s) <= root + 1e-6);
    }
}

TEST_CASE("every pattern reaches a valid leaf") {
    const auto ds = random_dataset(200, 3, 0.4, 21);
    ClusterOptions opt;
    opt.k_min = 3;
    const auto part = cluster_missing_patterns(ds, opt);
    std::set<int> seen;
    for (unsigned bits = 0; bits < 8; ++bits) {
        const int q = part.assign(mask_of({static_cast<std::uint8_t>(bits & 1), static_cast<std::uint8_t>((bits >> 1) & 1),
                                           static_cast<std::uint8_t>((bits >> 2) & 1)}));
        CHECK(q >= 0);
        CHECK(q < static_cast<int>(part.cluster_count()));
        seen.insert(q);
    }
    CHECK(seen.size() == part.cluster_count());
    // Training rows sit in the cluster their own mask routes to.
    for (std::size_t q = 0; q < part.cluster_count(); ++q)
        for (auto r : part.cluster_rows(q)) CHECK(part.assign(ds[r].mask()) == static_cast<int>(q));
}

TEST_CASE("serialize and parse agree on routing") {
    const auto ds = random_dataset(200, 4, 0.4, 33);
    ClusterOptions opt;
    opt.k_min = 4;
    const auto part = cluster_missing_patterns(ds, opt);
    const auto back = ClusterPartition::parse(part.serialize());
    CHECK(back.cluster_count() == part.cluster_count());
    CHECK(back.dimension() == part.dimension());
    CHECK(back.serialize() == part.serialize());
    for (unsigned bits = 0; bits < 16; ++bits) {
        std::vector<std::uint8_t> b;
        for (int j = 0; j < 4; ++j) b.push_back(static_cast<std::uint8_t>((bits >> j) & 1));
        CHECK(back.assign(mask_of(b)) == part.assign(mask_of(b)));
    }
}

TEST_CASE("hand-written partition") {
    const auto p = ClusterPartition::parse("dimension 3\n0 split 2 1 2\n1 leaf 0\n2 leaf 1\n");
    CHECK(p.cluster_count() == 2);
    CHECK(p.assign(mask_of({0, 0, 1})) == 1);
    CHECK(p.assign(mask_of({1, 1, 0})) == 0);
}

TEST_CASE("partition parse errors") {
    CHECK_THROWS_AS(ClusterPartition::parse("dimension 2\n0 split 1 1 5\n1 leaf 0\n"), ParseError);
    CHECK_THROWS_AS(ClusterPartition::parse("dimension 2\n1 leaf 0\n"), ParseError);
    CHECK_THROWS_AS(ClusterPartition::parse("dimension 2\n0 branch 1\n"), ParseError);
    CHECK_THROWS_AS(ClusterPartition::parse("dimension 2\n0 leaf 3\n"), ParseError);
    ClusterPartition empty;
    CHECK_THROWS_AS(empty.assign(mask_of({0})), StateError);
}

TEST_CASE("bounded-representation precondition") {
    const auto ds = random_dataset(40, 2, 0.3, 1);
    ClusterOptions opt;
    opt.beta = 0.6;  // above 1/|S|
    CHECK_THROWS_AS(cluster_missing_patterns(ds, opt), ParameterError);
    opt.beta = 0.0;
    opt.alpha = 0.4;  // below 1/|S|
    CHECK_THROWS_AS(cluster_missing_patterns(ds, opt), ParameterError);
    opt.alpha = 1.0;
    opt.k_min = 0;
    CHECK_THROWS_AS(cluster_missing_patterns(ds, opt), ParameterError);
}

TEST_CASE("validation holdout mode still produces a valid partition") {
    const auto ds = gen_synthetic(5);
    ClusterOptions opt;
    opt.validation_fraction = 0.3;
    opt.seed = 7;
    const auto part = cluster_missing_patterns(ds, opt);
    CHECK(part.cluster_count() == 2);
}
