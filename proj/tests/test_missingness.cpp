#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fairmiss/error.hpp"
#include "fairmiss/information.hpp"
#include "fairmiss/missingness.hpp"
#include "helpers.hpp"

using namespace fairmiss;
using testing_support::random_dataset;
using testing_support::row;

namespace {

// n rows, features (a, sex_flag, b), sex alternates, labels alternate in pairs.
Dataset compas_like(std::size_t n) {
    std::vector<Sample> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const int sex = static_cast<int>(i % 2);
        rows.push_back(row({static_cast<double>(i % 7), static_cast<double>(sex), 1.0}, sex,
                           static_cast<int>((i / 2) % 2)));
    }
    return Dataset(rows, {"priors_count", "sex", "other"});
}

double missing_rate(const Dataset& ds, std::size_t j) {
    std::size_t k = 0;
    for (const auto& s : ds.samples()) k += s.features[j] ? 0 : 1;
    return static_cast<double>(k) / static_cast<double>(ds.size());
}

MissingnessSpec spec_of(Mechanism m, std::initializer_list<const char*> entries) {
    MissingnessSpec spec;
    spec.mechanism = m;
    for (const auto* e : entries) spec.entries.push_back(MissingnessSpec::parse_entry(e));
    return spec;
}

}  // namespace

TEST_CASE("MAR on a binary column: expected missing fraction") {
    const auto ds = compas_like(10000);
    const auto spec = spec_of(Mechanism::mar, {"priors_count | sex | 0.1 | 0.4"});
    const auto out = inject_missing(ds, spec, 5);
    const double rate = missing_rate(out, 0);
    // binomial sd of the mixture is below sqrt(0.25 * 0.75 / 1e4) ~ 0.0043
    CHECK(std::abs(rate - 0.25) < 3 * 0.0044);
    CHECK(missing_rate(out, 1) == 0.0);
    CHECK(missing_rate(out, 2) == 0.0);
}

TEST_CASE("MCAR missing rate within the binomial band") {
    const auto ds = compas_like(10000);
    const auto out = inject_missing(ds, spec_of(Mechanism::mcar, {"other | none | 0.2 | 0.2"}), 17);
    CHECK(std::abs(missing_rate(out, 2) - 0.2) < 0.02);
    CHECK(std::abs(missing_rate(out, 2) - 0.2) < 3 * std::sqrt(0.2 * 0.8 / 1e4));
}

TEST_CASE("p1 = 0 leaves rows with I = 1 untouched") {
    const auto ds = compas_like(2000);
    const auto out = inject_missing(ds, spec_of(Mechanism::mar, {"priors_count | sex | 0.7 | 0"}), 3);
    std::size_t hidden0 = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (ds[i].features[1] == 1.0) CHECK(out[i].features[0].has_value());
        else hidden0 += out[i].features[0] ? 0 : 1;
    }
    CHECK(hidden0 > 0);
}

TEST_CASE("injection only hides observed values") {
    const auto ds = random_dataset(500, 4, 0.1, 21);
    const auto out = inject_missing(ds, spec_of(Mechanism::mnar, {"f0 | f0 > 0 | 0.2 | 0.6", "f2 | label | 0.1 | 0.5"}), 8);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.dimension(); ++j) {
            if (out[i].features[j]) CHECK(out[i].features[j] == ds[i].features[j]);
            if (!ds[i].features[j]) CHECK_FALSE(out[i].features[j].has_value());
        }
    CHECK(out.missing_count() > ds.missing_count());
}

TEST_CASE("injection is deterministic given the seed") {
    const auto ds = random_dataset(300, 3, 0.0, 2);
    const auto spec = spec_of(Mechanism::mcar, {"f1 | none | 0.3 | 0.3"});
    const auto a = inject_missing(ds, spec, 99), b = inject_missing(ds, spec, 99), c = inject_missing(ds, spec, 100);
    bool same = true, differ = false;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        same = same && a[i].features == b[i].features;
        differ = differ || a[i].features != c[i].features;
    }
    CHECK(same);
    CHECK(differ);
}

TEST_CASE("MNAR on the target's own value uses the pre-masking value") {
    std::vector<Sample> rows;
    for (int i = 0; i < 1000; ++i) rows.push_back(row({i % 2 ? 1.0 : -1.0}, i % 2, (i / 2) % 2));
    Dataset ds(rows, {"gain"});
    const auto out = inject_missing(ds, spec_of(Mechanism::mnar, {"gain | gain > 0 | 0 | 1"}), 1);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(out[i].features[0].has_value() == (*ds[i].features[0] < 0));
}

TEST_CASE("threshold indicator") {
    std::vector<Sample> rows;
    for (int i = 0; i < 100; ++i) rows.push_back(row({i / 100.0, 5.0}, i % 2, (i / 2) % 2));
    Dataset ds(rows, {"age", "x"});
    const auto out = inject_missing(ds, spec_of(Mechanism::mar, {"x | age < 0.2 | 0 | 1"}), 4);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(out[i].features[1].has_value() == (i >= 20));
}

TEST_CASE("MNAR on the label leaves an information trace") {
    const auto ds = random_dataset(10000, 2, 0.0, 31);
    const auto out = inject_missing(ds, spec_of(Mechanism::mnar, {"f0 | label | 0.1 | 0.4"}), 6);
    const double mi = mutual_info_MY(out);
    // Null: the same masks against a shuffled label column.
    auto samples = out.samples();
    auto labels = out.labels();
    std::mt19937_64 rng(12);
    std::shuffle(labels.begin(), labels.end(), rng);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i].label = labels[i];
    const double null = mutual_info_MY(out.with_samples(samples));
    CHECK(mi > 5.0 * null);
    CHECK(mi > 0.0);
}

TEST_CASE("spec validation") {
    const auto ds = compas_like(10);
    CHECK_THROWS_AS(spec_of(Mechanism::mar, {"priors_count | label | 0.1 | 0.4"}).validate(ds), ParameterError);
    CHECK_THROWS_AS(spec_of(Mechanism::mar, {"priors_count | sex | 1.5 | 0.4"}).validate(ds), ParameterError);
    CHECK_THROWS_AS(spec_of(Mechanism::mar, {"priors_count | sex | -0.1 | 0.4"}).validate(ds), ParameterError);
    CHECK_THROWS_AS(spec_of(Mechanism::mcar, {"priors_count | none | 0.1 | 0.4"}).validate(ds), ParameterError);
    CHECK_THROWS_AS(spec_of(Mechanism::mcar, {"priors_count | sex | 0.1 | 0.1"}).validate(ds), ParameterError);
    CHECK_THROWS_AS(spec_of(Mechanism::mar, {"priors_count | priors_count > 2 | 0.1 | 0.4"}).validate(ds),
                    ParameterError);
    CHECK_THROWS_AS(spec_of(Mechanism::mar, {"nope | sex | 0.1 | 0.4"}).validate(ds), SchemaError);
    CHECK_THROWS_AS(spec_of(Mechanism::mar, {"priors_count | nope | 0.1 | 0.4"}).validate(ds), SchemaError);
    CHECK_NOTHROW(spec_of(Mechanism::mnar, {"priors_count | label | 0.1 | 0.4"}).validate(ds));
    CHECK_THROWS_AS(MissingnessSpec::parse_entry("a | b | c"), ParseError);
    CHECK_THROWS_AS(MissingnessSpec::parse_entry("a | b | x | 0.1"), ParseError);
    CHECK_THROWS_AS(parse_mechanism("sometimes"), ParameterError);
}

TEST_CASE("MAR conditioning column must be fully observed") {
    Dataset ds({row({1.0, Cell{}}, 0, 0), row({2.0, 1.0}, 1, 1)}, {"a", "b"});
    CHECK_THROWS_AS(spec_of(Mechanism::mar, {"a | b | 0.1 | 0.4"}).validate(ds), DataError);
}

TEST_CASE("entry text round trip") {
    MissingnessSpec spec;
    for (const auto* e : {"a | none | 0.2 | 0.2", "a | label | 0.1 | 0.4", "a | sensitive | 0.3 | 0",
                          "a | b | 0.125 | 1", "a | age < 0.2 | 0.05 | 0.5", "a | a > -1.5 | 0 | 0.9"}) {
        const auto parsed = MissingnessSpec::parse_entry(e);
        const auto again = MissingnessSpec::parse_entry(spec.entry_text(parsed));
        CHECK(again.target == parsed.target);
        CHECK(again.indicator.kind == parsed.indicator.kind);
        CHECK(again.indicator.column == parsed.indicator.column);
        CHECK(again.indicator.threshold == parsed.indicator.threshold);
        CHECK(again.indicator.greater == parsed.indicator.greater);
        CHECK(again.p0 == parsed.p0);
        CHECK(again.p1 == parsed.p1);
    }
}

TEST_CASE("synthetic generator layout") {
    const auto ds = gen_synthetic(42);
    CHECK(ds.size() == 2400);
    std::size_t hidden = 0;
    for (const auto& s : ds.samples()) hidden += s.features[1] ? 0 : 1;
    CHECK(hidden == 800);
    CHECK(ds.missing_count() == 800);

    // (y=1, s=1, X2 present): 400 rows centred at (-3, -3).
    double m1 = 0, m2 = 0;
    std::size_t n = 0, hidden11 = 0, hidden10 = 0, hidden01 = 0, hidden00 = 0;
    for (const auto& s : ds.samples()) {
        if (!s.features[1]) {
            (s.label ? (s.sensitive ? hidden11 : hidden10) : (s.sensitive ? hidden01 : hidden00))++;
            continue;
        }
        if (s.label == 1 && s.sensitive == 1) {
            m1 += *s.features[0];
            m2 += *s.features[1];
            ++n;
        }
    }
    CHECK(n == 400);
    const double tol = 3.0 * std::sqrt(2.0 / 400.0);
    CHECK(std::abs(m1 / 400 + 3.0) < tol);
    CHECK(std::abs(m2 / 400 + 3.0) < tol);
    CHECK(hidden11 == 100);
    CHECK(hidden10 == 300);
    CHECK(hidden01 == 100);
    CHECK(hidden00 == 300);
}

TEST_CASE("synthetic hidden-X2 rows: X1 moments") {
    const auto ds = gen_synthetic(3);
    double sum = 0, sq = 0;
    std::size_t n = 0;
    for (const auto& s : ds.samples())
        if (!s.features[1] && s.label == 1) {
            sum += *s.features[0];
            sq += *s.features[0] * *s.features[0];
            ++n;
        }
    const double mean = sum / n, var = sq / n - mean * mean;
    CHECK(n == 400);
    CHECK(std::abs(mean - 3.0) < 3.0 * std::sqrt(3.0 / 400.0));
    CHECK(std::abs(var - 3.0) < 0.6);
}

TEST_CASE("synthetic generator is deterministic") {
    const auto a = gen_synthetic(9), b = gen_synthetic(9), c = gen_synthetic(10);
    bool same = true, differ = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        same = same && a[i].features == b[i].features;
        differ = differ || a[i].features != c[i].features;
    }
    CHECK(same);
    CHECK(differ);
}

TEST_CASE("exact construction table") {
    Theorem1Distribution dist{{0.25, 0.25}, {0.5, 0.5}};
    const auto t = exact_theorem1(dist);
    const auto na = t.value_index("NA");
    CHECK(t.at(0, na, 1) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(t.total() == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t s = 0; s < 2; ++s) {
        CHECK(t.at(s, 0, 0) == doctest::Approx(0.5 * 0.375));
        CHECK(t.at(s, 1, 0) == doctest::Approx(0.5 * 0.375));
        CHECK(t.at(s, 0, 1) == 0.0);
        CHECK(t.at(s, 1, 1) == 0.0);
        CHECK(t.at(s, na, 0) == 0.0);
    }
    CHECK(mutual_info_MY(t, na) == doctest::Approx(binary_entropy(0.25)).epsilon(1e-12));
}

TEST_CASE("unequal group alphas and the zero limit") {
    Theorem1Distribution dist{{0.1, 0.4}, {0.7, 0.3}};
    const auto t = exact_theorem1(dist);
    CHECK(t.total() == doctest::Approx(1.0));
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t x = 0; x < 3; ++x)
            for (int y = 0; y <= 1; ++y) CHECK(t.at(s, x, y) >= 0.0);

    const auto zero = exact_theorem1({{0.0, 0.0}, {0.5, 0.5}});
    CHECK(zero.cell_mass(0, 1) + zero.cell_mass(1, 1) == 0.0);
    CHECK(zero.at(0, 2, 0) + zero.at(1, 2, 0) == 0.0);
}

TEST_CASE("construction hypothesis") {
    CHECK_THROWS_AS(exact_theorem1({{0.4, 0.4}, {0.5, 0.5}}), ParameterError);
    CHECK_THROWS_AS(exact_theorem1({{0.1, 0.1}, {0.5, 0.6}}), ParameterError);
    CHECK_THROWS_AS(exact_theorem1({{0.1}, {0.5, 0.5}}), ParameterError);
}

TEST_CASE("sampled construction matches the table") {
    Theorem1Distribution dist{{0.2, 0.3}, {0.5, 0.5}};
    const auto ds = gen_theorem1(dist, 20000, 5);
    CHECK(ds.dimension() == 1);
    std::size_t na_pos = 0, na_total = 0, pos = 0;
    for (const auto& s : ds.samples()) {
        na_total += s.features[0] ? 0 : 1;
        na_pos += (!s.features[0] && s.label == 1) ? 1 : 0;
        pos += s.label;
        if (s.features[0]) CHECK((*s.features[0] == 0.0 || *s.features[0] == 1.0));
    }
    CHECK(na_pos == na_total);  // NA iff y = 1
    CHECK(pos == na_total);
    CHECK(std::abs(static_cast<double>(na_total) / 20000 - 0.25) < 0.015);
}

TEST_CASE("gaussian benchmark") {
    const auto ds = gen_gaussian_benchmark(2000, 4);
    CHECK(ds.size() == 2000);
    CHECK(ds.dimension() == 5);
    CHECK(ds.missing_count() == 0);
    CHECK(ds.groups() == std::vector<int>{0, 1});
}
