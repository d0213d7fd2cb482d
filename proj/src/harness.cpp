#include "fairmiss/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "fairmiss/error.hpp"
#include "fairmiss/metrics.hpp"
#include "fairmiss/oracle.hpp"
#include "logging.hpp"
#include "text_util.hpp"

namespace fairmiss {

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string fmt_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

const std::vector<std::pair<std::string, DisparityKind>> kDisparities = {
    {"fnr_diff", DisparityKind::fnr_diff},
    {"fpr_diff", DisparityKind::fpr_diff},
    {"meo", DisparityKind::meo},
    {"eqodds_max", DisparityKind::eqodds_max},
};

std::string metric_name(DisparityKind kind) {
    for (const auto& [name, k] : kDisparities)
        if (k == kind) return name;
    return "meo";
}

void add_metrics(std::map<std::string, double>& out, const std::string& prefix, std::span<const int> pred,
                 const Dataset& ds) {
    out[prefix + "accuracy"] = accuracy(pred, ds);
    const auto rates = group_rates(pred, ds);
    for (const auto& [name, kind] : kDisparities) out[prefix + name] = disparity(rates, kind);
}

Dataset load_source(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto& d = cfg.data;
    switch (d.source) {
        case DataConfig::Source::csv: return load_csv(d.csv, Schema::load(d.schema));
        case DataConfig::Source::synthetic: return gen_synthetic(seed);
        case DataConfig::Source::gaussian: return gen_gaussian_benchmark(d.n, seed);
        case DataConfig::Source::theorem1: return gen_theorem1(d.theorem1, d.n, seed);
    }
    throw ParameterError("unknown data source");
}

RunResult theorem1_oracle(const ExperimentConfig& cfg) {
    RunResult res;
    const auto& t = cfg.data.theorem1;
    for (std::size_t e = 0; e < cfg.data.theorem1_epsilons.size(); ++e) {
        const double eps = cfg.data.theorem1_epsilons[e];
        const auto rep = theorem1_report(t, eps);
        RepeatRecord r;
        r.method = "theorem1-oracle";
        r.grid_point = e;
        r.hyperparameters = "alpha=" + fmt_g(rep.alpha) + ";epsilon=" + fmt_g(eps);
        r.metrics["f_original"] = rep.f_original;
        r.metrics["f_imputed_best"] = rep.f_imputed_best;
        r.metrics["gap"] = rep.gap();
        r.metrics["mutual_info_MY"] = rep.mutual_info;
        r.metrics["binary_entropy_alpha"] = rep.binary_entropy;
        for (const auto& o : rep.imputations) r.metrics["f_imputed[" + o.name + "]"] = o.accuracy;
        res.records.push_back(std::move(r));
    }
    res.summary = sweep_and_aggregate(res.records);
    return res;
}

}  // namespace

std::vector<GridPoint> build_grid(const ExperimentConfig& cfg, Method method) {
    std::vector<GridPoint> out;
    const auto kind = cfg.intervention.kind;
    std::vector<std::size_t> kmins = method == Method::clustering ? cfg.k_min_grid : std::vector<std::size_t>{0};
    for (std::size_t k : kmins)
        for (double g : cfg.intervention_grid) {
            GridPoint gp;
            gp.id = out.size();
            gp.spec.method = method;
            gp.spec.imputer = method == Method::clustering || method == Method::affine ? ImputerSpec{} : cfg.imputer;
            gp.spec.intervention = cfg.intervention;
            gp.spec.cluster = cfg.cluster;
            gp.spec.cluster.loss_optimizer = cfg.intervention.penalty.optimizer;
            gp.spec.bags = cfg.bags;
            gp.spec.ensemble_mode = cfg.ensemble_mode;

            std::string hp = "intervention=" + cfg.intervention.name();
            if (kind == InterventionSpec::Kind::penalty) {
                gp.spec.intervention.penalty.tau = g;
                hp += ";constraint=" + to_string(cfg.intervention.penalty.constraint) + ";tau=" + fmt_g(g);
            } else if (kind == InterventionSpec::Kind::postprocess) {
                gp.spec.intervention.epsilon = g;
                hp += ";epsilon=" + fmt_g(g);
            }
            hp += ";imputer=" + gp.spec.imputer.name();
            if (method == Method::clustering) {
                gp.spec.cluster.k_min = k;
                hp += ";k_min=" + std::to_string(k) + ";alpha=" + fmt_g(cfg.cluster.alpha) +
                      ";beta=" + fmt_g(cfg.cluster.beta);
            }
            if (method == Method::fairmissbag)
                hp += ";bags=" + std::to_string(cfg.bags) + ";mode=" + to_string(cfg.ensemble_mode);
            gp.hyperparameters = hp;
            out.push_back(std::move(gp));
        }
    return out;
}

MeanError mean_and_error(std::span<const double> values) {
    MeanError out;
    if (values.empty()) return out;
    // Constant input: report the value itself, no rounding residue.
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
        out.mean = values.front();
        return out;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    const double n = static_cast<double>(values.size());
    out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return out;
}

std::vector<SummaryRow> sweep_and_aggregate(const std::vector<RepeatRecord>& records) {
    using Key = std::pair<std::string, std::size_t>;
    std::map<Key, std::string> hyper;
    std::map<Key, std::set<std::string>> metric_names;
    std::map<Key, std::set<std::size_t>> seen;
    std::map<Key, std::map<std::string, std::vector<double>>> values;
    for (const auto& r : records) {
        Key key{r.method, r.grid_point};
        std::set<std::string> names;
        for (const auto& [m, _] : r.metrics) names.insert(m);
        auto [it, fresh] = hyper.emplace(key, r.hyperparameters);
        if (fresh) {
            metric_names[key] = names;
        } else {
            if (it->second != r.hyperparameters)
                throw ParameterError("mismatched grids: " + r.method + " grid point " + std::to_string(r.grid_point) +
                                     " has hyperparameters '" + it->second + "' and '" + r.hyperparameters + "'");
            if (metric_names[key] != names)
                throw ParameterError("mismatched metrics for " + r.method + " grid point " + std::to_string(r.grid_point));
        }
        if (!seen[key].insert(r.repeat).second)
            throw ParameterError("repeat " + std::to_string(r.repeat) + " recorded twice for " + r.method +
                                 " grid point " + std::to_string(r.grid_point));
        for (const auto& [m, v] : r.metrics) values[key][m].push_back(v);
    }
    std::vector<SummaryRow> out;
    for (const auto& [key, per_metric] : values)
        for (const auto& [m, vs] : per_metric) {
            const auto me = mean_and_error(vs);
            out.push_back({key.first, key.second, hyper[key], m, me.mean, me.std_error});
        }
    return out;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.data.source == DataConfig::Source::theorem1 && cfg.data.theorem1_exact) return theorem1_oracle(cfg);

    struct Job {
        Method method;
        GridPoint point;
    };
    std::vector<Job> jobs;
    for (Method m : cfg.methods)
        for (auto& gp : build_grid(cfg, m)) jobs.push_back({m, std::move(gp)});

    RunResult res;
    std::optional<Dataset> fixed;
    if (cfg.data.source == DataConfig::Source::csv) fixed = load_source(cfg, cfg.seed);

    for (std::size_t r = 0; r < cfg.repeats; ++r) {
        const std::uint64_t seed = cfg.seed + r;
        Dataset train, test;
        try {
            Dataset data = fixed ? *fixed : load_source(cfg, seed);
            if (cfg.data.balance != BalanceMode::none) data = balance(data, cfg.data.balance, seed);
            if (cfg.missingness) {
                cfg.missingness->validate(data);
                if (cfg.inject_before_split) data = inject_missing(data, *cfg.missingness, seed);
            }
            std::tie(train, test) = split_train_test(data, cfg.test_fraction, seed);
            if (cfg.missingness && !cfg.inject_before_split) {
                train = inject_missing(train, *cfg.missingness, seed);
                test = inject_missing(test, *cfg.missingness, seed ^ 0x9E3779B97F4A7C15ULL);
            }
            if (cfg.data.scale) {
                const auto stats = fit_scaler(train);
                train = apply_scaler(stats, train);
                test = apply_scaler(stats, test);
            }
        } catch (const Error& e) {
            log::warn("repeat {} failed while preparing data: {}", r, e.what());
            for (const auto& j : jobs) res.failures.push_back({to_string(j.method), j.point.id, r, e.what()});
            continue;
        }

        for (const auto& j : jobs) {
            try {
                const auto fitted = fit_pipeline(j.point.spec, train, seed);
                RepeatRecord rec;
                rec.method = to_string(j.method);
                rec.grid_point = j.point.id;
                rec.hyperparameters = j.point.hyperparameters;
                rec.repeat = r;
                add_metrics(rec.metrics, "train_", fitted.predict(train, seed), train);
                add_metrics(rec.metrics, "test_", fitted.predict(test, seed), test);
                log::info("{} [{}] repeat {}: test accuracy {:.4f}, meo {:.4f}", rec.method, rec.hyperparameters, r,
                          rec.metrics["test_accuracy"], rec.metrics["test_meo"]);
                res.records.push_back(std::move(rec));
            } catch (const Error& e) {
                log::warn("{} grid point {} repeat {} failed: {}", to_string(j.method), j.point.id, r, e.what());
                res.failures.push_back({to_string(j.method), j.point.id, r, e.what()});
            }
        }
    }

    auto by_key = [](const auto& a, const auto& b) {
        return std::tie(a.method, a.grid_point, a.repeat) < std::tie(b.method, b.grid_point, b.repeat);
    };
    std::sort(res.records.begin(), res.records.end(), by_key);
    std::sort(res.failures.begin(), res.failures.end(), by_key);

    for (const auto& j : jobs) {
        const auto name = to_string(j.method);
        const bool any = std::any_of(res.records.begin(), res.records.end(),
                                     [&](const auto& rec) { return rec.method == name && rec.grid_point == j.point.id; });
        if (!any) {
            log::warn("{} grid point {}: every repeat failed", name, j.point.id);
            res.all_grid_points_succeeded = false;
        }
    }

    res.summary = sweep_and_aggregate(res.records);

    // Frontier per method over aggregated test accuracy and disparity.
    const std::string disp = "test_" + metric_name(cfg.pareto_disparity);
    std::map<std::string, std::map<std::size_t, TradeoffPoint>> points;
    for (const auto& row : res.summary) {
        auto& p = points[row.method][row.grid_point];
        p.provenance["grid_point"] = std::to_string(row.grid_point);
        if (row.metric == "test_accuracy") p.accuracy = row.mean;
        if (row.metric == disp) p.disparity = row.mean;
    }
    std::set<std::pair<std::string, std::size_t>> keep;
    for (const auto& [method, per_point] : points) {
        std::vector<TradeoffPoint> pts;
        for (const auto& [_, p] : per_point) pts.push_back(p);
        for (const auto& p : pareto_frontier(pts)) {
            // pareto_frontier keeps one of several exact duplicates; keep all of them.
            for (const auto& [gp, q] : per_point)
                if (q.accuracy == p.accuracy && q.disparity == p.disparity) keep.insert({method, gp});
        }
    }
    for (const auto& row : res.summary)
        if (keep.count({row.method, row.grid_point})) res.pareto.push_back(row);
    return res;
}

std::string raw_csv(const RunResult& result) {
    std::ostringstream out;
    out << "method,grid_point,hyperparameters,repeat,metric,value\n";
    for (const auto& r : result.records)
        for (const auto& [m, v] : r.metrics)
            out << csv_field(r.method) << ',' << r.grid_point << ',' << csv_field(r.hyperparameters) << ','
                << r.repeat << ',' << csv_field(m) << ',' << fmt_exact(v) << '\n';
    return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "method,grid_point,hyperparameters,metric,mean,stderr\n";
    for (const auto& r : rows)
        out << csv_field(r.method) << ',' << r.grid_point << ',' << csv_field(r.hyperparameters) << ','
            << csv_field(r.metric) << ',' << fmt_exact(r.mean) << ',' << fmt_exact(r.std_error) << '\n';
    return out.str();
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    detail::write_file(dir / "raw.csv", raw_csv(result));
    detail::write_file(dir / "summary.csv", summary_csv(result.summary));
    detail::write_file(dir / "pareto.csv", summary_csv(result.pareto));
    std::ostringstream f;
    f << "method,grid_point,repeat,error\n";
    for (const auto& e : result.failures)
        f << csv_field(e.method) << ',' << e.grid_point << ',' << e.repeat << ',' << csv_field(e.error) << '\n';
    detail::write_file(dir / "failures.csv", f.str());
}

}  // namespace fairmiss
