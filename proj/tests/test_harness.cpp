#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fairmiss/config.hpp"
#include "fairmiss/error.hpp"
#include "fairmiss/harness.hpp"
#include "fairmiss/pipeline.hpp"
#include "helpers.hpp"

using namespace fairmiss;
namespace fs = std::filesystem;

namespace {

ExperimentConfig from(const std::string& text) { return ExperimentConfig::from_text(ConfigText::parse(text)); }

const char* kSmall = R"(
[data]
source = gaussian
n = 300

[missingness]
mechanism = mnar
entry = x1 | label | 0.1 | 0.4
entry = x2 | sensitive | 0.1 | 0.3

[method]
methods = impute-then-classify, indicators, affine, clustering, fairmissbag
imputer = mean
k_min = 1, 20
bags = 3

[intervention]
kind = penalty
constraint = meo
grid = 0, 1
max_iters = 200

[sweep]
repeats = 2
seed = 11
)";

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("fairmiss_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = from(kSmall);
    CHECK(cfg.data.source == DataConfig::Source::gaussian);
    CHECK(cfg.data.n == 300);
    REQUIRE(cfg.missingness);
    CHECK(cfg.missingness->entries.size() == 2);
    CHECK(cfg.methods.size() == 5);
    CHECK(cfg.k_min_grid == std::vector<std::size_t>{1, 20});
    CHECK(cfg.intervention_grid == std::vector<double>{0.0, 1.0});
    CHECK(cfg.repeats == 2);
    CHECK(cfg.seed == 11);
    CHECK(cfg.test_fraction == 0.3);
    CHECK_NOTHROW(cfg.validate());

    // Clustering crosses k_min with the intervention grid.
    CHECK(build_grid(cfg, Method::clustering).size() == 4);
    CHECK(build_grid(cfg, Method::indicators).size() == 2);
    CHECK(build_grid(cfg, Method::affine)[0].hyperparameters.find("imputer=zero") != std::string::npos);
    CHECK(build_grid(cfg, Method::indicators)[1].hyperparameters ==
          "intervention=penalty;constraint=meo;tau=1;imputer=mean");
}

TEST_CASE("default grids") {
    CHECK(from("[intervention]\nkind = penalty\n").intervention_grid == default_grid(InterventionSpec::Kind::penalty));
    CHECK(from("[intervention]\nkind = postprocess\n").intervention_grid ==
          std::vector<double>{0.0, 0.001, 0.01, 0.1, 0.5});
    CHECK(from("").intervention_grid == std::vector<double>{0.0});
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(ConfigText::parse("[nope]\n"), ParseError);
    CHECK_THROWS_AS(ConfigText::parse("[data]\ncolour = red\n"), ParseError);
    CHECK_THROWS_AS(ConfigText::parse("source = csv\n"), ParseError);
    CHECK_THROWS_AS(ConfigText::parse("[data\n"), ParseError);
    CHECK_THROWS_AS(ConfigText::parse("[data]\nsource\n"), ParseError);
    CHECK_THROWS_AS(from("[data]\nsource = excel\n"), ParseError);
    CHECK_THROWS_AS(from("[data]\nsource = csv\n"), ParseError);
    CHECK_THROWS_AS(from("[sweep]\nrepeats = many\n"), ParseError);
    CHECK_THROWS_AS(from("[method]\nmethods = magic\n"), ParseError);
    CHECK_THROWS_AS(from("[missingness]\nmechanism = mcar\n"), ParseError);
    CHECK_THROWS_AS(from("[sweep]\nrepeats = 0\n").validate(), ParameterError);
    CHECK_THROWS_AS(from("[sweep]\ntest_fraction = 1\n").validate(), ParameterError);
    CHECK_THROWS_AS(from("[method]\ncluster_alpha = 0.2\ncluster_beta = 0.5\n").validate(), ParameterError);
    CHECK_THROWS_AS(from("[data]\nsource = csv\npath = /nonexistent.csv\nschema = /nonexistent\n").validate(),
                    ParameterError);
    CHECK_THROWS_AS(from("[intervention]\nkind = penalty\ngrid = -1\n").validate(), ParameterError);
    try {
        ConfigText::parse("[data]\n\n# comment\nbogus = 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("relative paths resolve against the config directory") {
    const auto cfg = ExperimentConfig::from_text(
        ConfigText::parse("[data]\nsource = csv\npath = d.csv\nschema = d.schema\n[output]\ndir = out\n"), "/tmp/x");
    CHECK(cfg.data.csv == fs::path("/tmp/x/d.csv"));
    CHECK(cfg.output_dir == fs::path("/tmp/x/out"));
}

TEST_CASE("mean and standard error") {
    const std::vector<double> two{0.8, 0.9};
    const auto me = mean_and_error(two);
    CHECK(me.mean == doctest::Approx(0.85));
    CHECK(me.std_error == doctest::Approx(0.05));
    const std::vector<double> one{0.3};
    CHECK(mean_and_error(one).std_error == 0.0);
    const std::vector<double> flat{0.4, 0.4, 0.4};
    CHECK(mean_and_error(flat).std_error == 0.0);
}

TEST_CASE("aggregation checks the grid") {
    RepeatRecord a{"m", 0, "tau=1", 0, {{"acc", 0.8}}};
    RepeatRecord b{"m", 0, "tau=1", 1, {{"acc", 0.9}}};
    auto rows = sweep_and_aggregate({a, b});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean == doctest::Approx(0.85));

    RepeatRecord c = b;
    c.hyperparameters = "tau=2";
    CHECK_THROWS_AS(sweep_and_aggregate({a, c}), ParameterError);
    RepeatRecord d = b;
    d.metrics = {{"other", 1.0}};
    CHECK_THROWS_AS(sweep_and_aggregate({a, d}), ParameterError);
    CHECK_THROWS_AS(sweep_and_aggregate({a, a}), ParameterError);
}

TEST_CASE("full run: every method, deterministic output, pareto subset") {
    const auto cfg = from(kSmall);
    const auto r1 = run_experiment(cfg);
    const auto r2 = run_experiment(cfg);
    CHECK(r1.all_grid_points_succeeded);
    CHECK(r1.failures.empty());
    // 2 + 2 + 2 + 4 + 2 grid points, 2 repeats.
    CHECK(r1.records.size() == 24);

    const auto d1 = scratch("run1"), d2 = scratch("run2");
    write_outputs(r1, d1);
    write_outputs(r2, d2);
    for (const char* f : {"raw.csv", "summary.csv", "pareto.csv", "failures.csv"}) {
        CAPTURE(f);
        CHECK(slurp(d1 / f) == slurp(d2 / f));
    }
    CHECK(slurp(d1 / "raw.csv").rfind("method,grid_point,hyperparameters,repeat,metric,value\n", 0) == 0);

    for (const auto& rec : r1.records) {
        CHECK(rec.metrics.at("test_accuracy") >= 0.0);
        CHECK(rec.metrics.at("test_accuracy") <= 1.0);
        CHECK(rec.metrics.at("test_meo") ==
              doctest::Approx((rec.metrics.at("test_fnr_diff") + rec.metrics.at("test_fpr_diff")) / 2));
    }

    // Pareto rows come from the summary and are mutually non-dominating per method.
    std::set<std::tuple<std::string, std::size_t, std::string>> summary;
    for (const auto& s : r1.summary) summary.insert({s.method, s.grid_point, s.metric});
    std::map<std::pair<std::string, std::size_t>, std::pair<double, double>> front;
    for (const auto& p : r1.pareto) {
        CHECK(summary.count({p.method, p.grid_point, p.metric}) == 1);
        if (p.metric == "test_accuracy") front[{p.method, p.grid_point}].first = p.mean;
        if (p.metric == "test_meo") front[{p.method, p.grid_point}].second = p.mean;
    }
    CHECK(!front.empty());
    for (const auto& [ka, a] : front)
        for (const auto& [kb, b] : front) {
            if (ka.first != kb.first || ka == kb) continue;
            const bool dominates = b.first >= a.first && b.second <= a.second && (b.first > a.first || b.second < a.second);
            CHECK_FALSE(dominates);
        }
}

TEST_CASE("a different seed changes the run") {
    auto cfg = from(kSmall);
    cfg.methods = {Method::indicators};
    const auto a = raw_csv(run_experiment(cfg));
    cfg.seed = 12;
    CHECK(raw_csv(run_experiment(cfg)) != a);
}

TEST_CASE("construction-table oracle run") {
    const auto cfg = from("[data]\nsource = theorem1\nalpha0 = 0.25\nq0 = 0.5\nepsilon = 0, 0.5\n");
    const auto res = run_experiment(cfg);
    REQUIRE(res.records.size() == 2);
    const auto& m = res.records[0].metrics;
    CHECK(m.at("f_original") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.at("f_imputed_best") == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(m.at("mutual_info_MY") == doctest::Approx(0.811278124459).epsilon(1e-9));
}

TEST_CASE("test rows never reach the fit") {
    // Two CSVs that differ only in rows that land in the test split.
    const auto ds = testing_support::random_dataset(300, 3, 0.2, 3);
    const auto [train_idx, test_idx] = split_indices(ds, 0.3, 21);
    auto rows = ds.samples();
    for (auto i : test_idx)
        for (auto& c : rows[i].features)
            if (c) *c = *c * 1000.0 + 17.0;
    const auto dir = scratch("leak");
    Schema schema;
    for (const auto& n : ds.feature_names()) schema.columns.emplace_back(n, ColumnRole::feature);
    schema.columns.emplace_back("s", ColumnRole::sensitive);
    schema.columns.emplace_back("y", ColumnRole::label);
    std::ofstream(dir / "schema") << schema.to_text();
    std::ofstream(dir / "a.csv") << to_csv(ds);
    std::ofstream(dir / "b.csv") << to_csv(ds.with_samples(rows));

    auto metrics_for = [&](const std::string& file) {
        auto cfg = ExperimentConfig::from_text(ConfigText::parse("[data]\nsource = csv\npath = " + file +
                                                                 "\nschema = schema\n"
                                                                 "[method]\nmethods = impute-then-classify, "
                                                                 "clustering, fairmissbag\nimputer = mean\nbags = 3\n"
                                                                 "[sweep]\nrepeats = 1\nseed = 21\n"),
                                               dir);
        std::map<std::string, double> train;
        for (const auto& rec : run_experiment(cfg).records)
            for (const auto& [m, v] : rec.metrics)
                if (m.rfind("train_", 0) == 0) train[rec.method + "/" + m] = v;
        return train;
    };
    const auto a = metrics_for("a.csv");
    const auto b = metrics_for("b.csv");
    CHECK(a.size() == 15);
    CHECK(a == b);
}

#ifdef FAIRMISS_CLI
TEST_CASE("command-line exit codes") {
    const std::string cli = FAIRMISS_CLI;
    const auto dir = scratch("cli");
    auto run = [](const std::string& cmd) {
        const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(rc);
    };
    CHECK(run(cli + " theorem1 --alpha 0.25 --q0 0.5") == 0);
    CHECK(run(cli + " theorem1 --alpha 0.9 --q0 0.5") == 2);
    CHECK(run(cli + " frobnicate") != 0);

    std::ofstream(dir / "bad.ini") << "[data]\nsource = nowhere\n";
    CHECK(run(cli + " validate " + (dir / "bad.ini").string()) == 2);

    std::ofstream(dir / "ok.ini") << "[data]\nsource = synthetic\n[sweep]\nrepeats = 1\n[output]\ndir = out\n";
    CHECK(run(cli + " validate " + (dir / "ok.ini").string()) == 0);
    CHECK(run(cli + " run " + (dir / "ok.ini").string()) == 0);
    CHECK(fs::exists(dir / "out" / "raw.csv"));
    CHECK(fs::exists(dir / "out" / "pareto.csv"));

    CHECK(run(cli + " synthetic --seed 3 --out " + (dir / "syn.csv").string()) == 0);
    std::ofstream(dir / "csv.ini") << "[data]\nsource = csv\npath = syn.csv\nschema = syn.csv.schema\n"
                                   << "[sweep]\nrepeats = 1\n[output]\ndir = out_csv\n";
    CHECK(run(cli + " run " + (dir / "csv.ini").string()) == 0);
    CHECK(fs::exists(dir / "out_csv" / "summary.csv"));
}
#endif
