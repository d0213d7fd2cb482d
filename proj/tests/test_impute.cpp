#include <doctest.h>

#include <cmath>
#include <limits>

#include "fairmiss/error.hpp"
#include "fairmiss/impute.hpp"
#include "helpers.hpp"

using namespace fairmiss;
using testing_support::random_dataset;
using testing_support::row;

namespace {

Imputer fitted(ImputerSpec::Method m, const Dataset& train, std::size_t k = 5) {
    ImputerSpec spec;
    spec.method = m;
    spec.knn_k = k;
    Imputer imp(spec);
    imp.fit(train);
    return imp;
}

void check_contract(const Imputer& imp, const Dataset& ds) {
    const auto out = imp.transform(ds);
    CHECK(out.missing_count() == 0);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.dimension(); ++j)
            if (ds[i].features[j]) CHECK(*out[i].features[j] == *ds[i].features[j]);
    // A complete dataset passes through unchanged.
    const auto again = imp.transform(out);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(again[i].features == out[i].features);
}

}  // namespace

TEST_CASE("zero imputation needs no fit") {
    Imputer imp;
    const auto out = imp.transform(Sample{{Cell{}, 1.5}, 0, 0});
    CHECK(*out.features[0] == 0.0);
    CHECK(*out.features[1] == 1.5);
}

TEST_CASE("mean imputation") {
    Dataset train({row({1.0}, 0, 0), row({3.0}, 1, 1), row({Cell{}}, 0, 1)}, {"x"});
    const auto imp = fitted(ImputerSpec::Method::mean, train);
    CHECK(imp.means()[0] == 2.0);
    CHECK(*imp.transform(Sample{{Cell{}}, 0, 0}).features[0] == 2.0);
}

TEST_CASE("knn with k = 1 copies the matching neighbour") {
    Dataset train({row({1.0, 2.0, 3.0}, 0, 0), row({5.0, 6.0, 7.0}, 1, 1), row({9.0, 1.0, 4.0}, 0, 1)},
                  {"a", "b", "c"});
    const auto imp = fitted(ImputerSpec::Method::knn, train, 1);
    const auto out = imp.transform(Sample{{5.0, Cell{}, 7.0}, 1, 0});
    CHECK(*out.features[1] == 6.0);
}

TEST_CASE("knn averages k neighbours and breaks ties by row index") {
    // Three rows at the same distance; k = 2 takes the first two.
    Dataset train({row({0.0, 10.0}, 0, 0), row({0.0, 20.0}, 1, 1), row({0.0, 40.0}, 0, 1), row({9.0, 0.0}, 1, 0)},
                  {"a", "b"});
    const auto imp = fitted(ImputerSpec::Method::knn, train, 2);
    CHECK(*imp.transform(Sample{{0.0, Cell{}}, 0, 0}).features[1] == 15.0);
}

TEST_CASE("partial distance") {
    const Sample a{{1.0, Cell{}, 3.0}, 0, 0}, b{{4.0, 2.0, Cell{}}, 0, 0}, c{{Cell{}, 5.0, Cell{}}, 0, 0};
    CHECK(partial_distance(a, a) == 0.0);
    // shared coordinate 0 only: sqrt(9 * 3 / 1)
    CHECK(partial_distance(a, b) == doctest::Approx(std::sqrt(27.0)));
    CHECK(partial_distance(a, b) == partial_distance(b, a));
    CHECK(std::isinf(partial_distance(a, c)));
}

TEST_CASE("contract holds for every method") {
    const auto train = random_dataset(120, 4, 0.2, 5);
    const auto test = random_dataset(60, 4, 0.3, 6);
    for (auto m : {ImputerSpec::Method::zero, ImputerSpec::Method::mean, ImputerSpec::Method::knn,
                   ImputerSpec::Method::iterative}) {
        CAPTURE(static_cast<int>(m));
        const auto imp = fitted(m, train);
        check_contract(imp, train);
        check_contract(imp, test);
        // Deterministic.
        const auto a = imp.transform(test), b = imp.transform(test);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].features == b[i].features);
    }
}

TEST_CASE("transform before fit is a state error") {
    for (auto m : {ImputerSpec::Method::mean, ImputerSpec::Method::knn, ImputerSpec::Method::iterative}) {
        ImputerSpec spec;
        spec.method = m;
        Imputer imp(spec);
        CHECK_THROWS_AS(imp.transform(Sample{{Cell{}}, 0, 0}), StateError);
    }
}

TEST_CASE("fully missing training feature names the feature") {
    Dataset train({row({1.0, Cell{}}, 0, 0), row({2.0, Cell{}}, 1, 1)}, {"a", "blank"});
    ImputerSpec spec;
    spec.method = ImputerSpec::Method::mean;
    Imputer imp(spec);
    try {
        imp.fit(train);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("blank") != std::string::npos);
    }
}

TEST_CASE("knn k bounds") {
    const auto train = random_dataset(5, 2, 0.0, 1);
    ImputerSpec spec;
    spec.method = ImputerSpec::Method::knn;
    spec.knn_k = 6;
    Imputer imp(spec);
    CHECK_THROWS_AS(imp.fit(train), ParameterError);
    spec.knn_k = 0;
    Imputer imp0(spec);
    CHECK_THROWS_AS(imp0.fit(train), ParameterError);
}

TEST_CASE("iterative imputation recovers a linear relation") {
    // b = 2a + 1 exactly; hide b in a third of the rows.
    std::vector<Sample> rows;
    for (int i = 0; i < 90; ++i) {
        const double a = i / 10.0;
        rows.push_back(row({a, i % 3 == 0 ? Cell{} : Cell{2.0 * a + 1.0}}, i % 2, (i / 2) % 2));
    }
    Dataset train(rows, {"a", "b"});
    const auto imp = fitted(ImputerSpec::Method::iterative, train);
    const auto out = imp.transform(Sample{{4.0, Cell{}}, 0, 0});
    CHECK(*out.features[1] == doctest::Approx(9.0).epsilon(1e-2));

    const auto& changes = imp.round_changes();
    REQUIRE(changes.size() == 10);
    for (std::size_t r = 1; r < changes.size(); ++r) CHECK(changes[r] <= changes[r - 1] + 1e-9);
}

TEST_CASE("imputer spec names") {
    CHECK(ImputerSpec::parse("zero").method == ImputerSpec::Method::zero);
    CHECK(ImputerSpec::parse("mean").method == ImputerSpec::Method::mean);
    CHECK(ImputerSpec::parse("knn").method == ImputerSpec::Method::knn);
    CHECK(ImputerSpec::parse("iterative").method == ImputerSpec::Method::iterative);
    CHECK_THROWS_AS(ImputerSpec::parse("median"), ParameterError);
    CHECK(ImputerSpec::parse(ImputerSpec::parse("knn").name()).method == ImputerSpec::Method::knn);
}
