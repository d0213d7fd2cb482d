// Command-line front end: run / validate experiment configs, print the
// missing-pattern accuracy-gap report, dump the synthetic dataset.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fairmiss/config.hpp"
#include "fairmiss/error.hpp"
#include "fairmiss/harness.hpp"
#include "fairmiss/missingness.hpp"
#include "fairmiss/oracle.hpp"

using namespace fairmiss;

namespace {

int cmd_run(const std::string& path, const std::string& out_override) {
    auto cfg = ExperimentConfig::load(path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    const auto res = run_experiment(cfg);
    write_outputs(res, cfg.output_dir);
    std::cout << "records " << res.records.size() << ", failures " << res.failures.size() << ", pareto rows "
              << res.pareto.size() << " -> " << cfg.output_dir.string() << "\n";
    return res.all_grid_points_succeeded ? 0 : 1;
}

int cmd_validate(const std::string& path) {
    const auto cfg = ExperimentConfig::load(path);
    cfg.validate();
    if (cfg.missingness) {
        // Column checks need the data itself.
        Dataset ds;
        switch (cfg.data.source) {
            case DataConfig::Source::csv: ds = load_csv(cfg.data.csv, Schema::load(cfg.data.schema)); break;
            case DataConfig::Source::synthetic: ds = gen_synthetic(cfg.seed); break;
            case DataConfig::Source::gaussian: ds = gen_gaussian_benchmark(cfg.data.n, cfg.seed); break;
            case DataConfig::Source::theorem1: ds = gen_theorem1(cfg.data.theorem1, cfg.data.n, cfg.seed); break;
        }
        cfg.missingness->validate(ds);
    }
    if (cfg.data.source == DataConfig::Source::theorem1 && cfg.data.theorem1_exact) {
        std::cout << "ok: exact table, " << cfg.data.theorem1_epsilons.size() << " epsilon value(s)\n";
        return 0;
    }
    std::size_t points = 0;
    for (Method m : cfg.methods) points += build_grid(cfg, m).size();
    std::cout << "ok: " << cfg.methods.size() << " method(s), " << points << " grid point(s), " << cfg.repeats
              << " repeat(s)\n";
    return 0;
}

int cmd_theorem1(double alpha0, double alpha1, double q0, double epsilon) {
    Theorem1Distribution dist{{alpha0, alpha1 < 0 ? alpha0 : alpha1}, {q0, 1.0 - q0}};
    const auto rep = theorem1_report(dist, epsilon);
    std::printf("alpha            %.6f\n", rep.alpha);
    std::printf("epsilon          %.6f\n", rep.epsilon);
    std::printf("F(original)      %.9f\n", rep.f_original);
    for (const auto& o : rep.imputations) std::printf("%-17s%.9f\n", ("F(" + o.name + ")").c_str(), o.accuracy);
    std::printf("F(imputed, best) %.9f\n", rep.f_imputed_best);
    std::printf("gap              %.9f\n", rep.gap());
    std::printf("I(M;Y)           %.12f\n", rep.mutual_info);
    std::printf("g(alpha)         %.12f\n", rep.binary_entropy);
    return 0;
}

int cmd_synthetic(std::uint64_t seed, const std::string& out) {
    const auto ds = gen_synthetic(seed);
    std::ofstream(out) << to_csv(ds);
    Schema schema;
    for (const auto& n : ds.feature_names()) schema.columns.emplace_back(n, ColumnRole::feature);
    schema.columns.emplace_back("s", ColumnRole::sensitive);
    schema.columns.emplace_back("y", ColumnRole::label);
    std::ofstream(out + ".schema") << schema.to_text();
    std::cout << "wrote " << ds.size() << " rows to " << out << " (schema " << out << ".schema)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairmiss: fair classification with missing values"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "override [output] dir");

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "config file")->required()->check(CLI::ExistingFile);

    double alpha0 = 0.25, alpha1 = -1.0, q0 = 0.5, epsilon = 0.0;
    auto* t1 = app.add_subcommand("theorem1", "accuracy gap of imputation on the missing-pattern table");
    t1->add_option("--alpha", alpha0, "alpha of group 0 (and group 1 unless --alpha1)")->required();
    t1->add_option("--alpha1", alpha1, "alpha of group 1");
    t1->add_option("--q0", q0, "prior of group 0")->required();
    t1->add_option("--epsilon", epsilon, "equalized-odds tolerance");

    std::uint64_t seed = 0;
    std::string out_path;
    auto* syn = app.add_subcommand("synthetic", "write the two-feature synthetic dataset as CSV");
    syn->add_option("--seed", seed, "seed")->required();
    syn->add_option("--out", out_path, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path, out_dir);
        if (*validate) return cmd_validate(config_path);
        if (*t1) return cmd_theorem1(alpha0, alpha1, q0, epsilon);
        if (*syn) return cmd_synthetic(seed, out_path);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
