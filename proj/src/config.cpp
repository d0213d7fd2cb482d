#include "fairmiss/config.hpp"

#include <algorithm>
#include <set>

#include "fairmiss/error.hpp"
#include "text_util.hpp"

namespace fairmiss {

namespace {

using detail::parse_double;
using detail::parse_ll;
using detail::split;
using detail::trim;

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"data", {"source", "path", "schema", "n", "alpha0", "alpha1", "q0", "mode", "epsilon", "scale", "balance"}},
    {"missingness", {"mechanism", "entry", "inject_before_split"}},
    {"method", {"methods", "imputer", "knn_k", "iter_rounds", "iter_lambda", "k_min", "cluster_alpha",
                "cluster_beta", "cluster_validation", "bags", "ensemble_mode"}},
    {"intervention", {"kind", "constraint", "grid", "l2", "max_iters", "tolerance"}},
    {"sweep", {"repeats", "test_fraction", "seed"}},
    {"output", {"dir", "pareto_disparity"}},
};

double to_double(const std::string& section, const std::string& key, const std::string& v) {
    auto d = parse_double(v);
    if (!d) throw ParseError("[" + section + "] " + key + ": expected a number, got '" + v + "'");
    return *d;
}

long long to_ll(const std::string& section, const std::string& key, const std::string& v) {
    auto d = parse_ll(v);
    if (!d) throw ParseError("[" + section + "] " + key + ": expected an integer, got '" + v + "'");
    return *d;
}

std::size_t to_size(const std::string& section, const std::string& key, const std::string& v) {
    auto d = to_ll(section, key, v);
    if (d < 0) throw ParseError("[" + section + "] " + key + ": must be non-negative");
    return static_cast<std::size_t>(d);
}

bool to_bool(const std::string& section, const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParseError("[" + section + "] " + key + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> list_of(const std::string& v) {
    std::vector<std::string> out;
    for (auto& item : split(v, ',')) {
        auto t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::vector<double> doubles_of(const std::string& section, const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : list_of(v)) out.push_back(to_double(section, key, item));
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) return base / path;
    return path;
}

}  // namespace

ConfigText ConfigText::parse(const std::string& text) {
    ConfigText cfg;
    std::string section;
    std::size_t lineno = 0;
    for (const auto& raw : split(text, '\n')) {
        ++lineno;
        auto line = detail::strip_comment(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!kKnownKeys.count(section))
                throw ParseError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            cfg.entries_[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty()) throw ParseError("line " + std::to_string(lineno) + ": key outside any section");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (!kKnownKeys.at(section).count(key))
            throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "' in [" + section + "]");
        cfg.entries_[section].emplace_back(key, value);
    }
    return cfg;
}

bool ConfigText::has(const std::string& section, const std::string& key) const {
    auto it = entries_.find(section);
    if (it == entries_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(), [&](const auto& kv) { return kv.first == key; });
}

const std::string& ConfigText::get(const std::string& section, const std::string& key) const {
    auto it = entries_.find(section);
    if (it != entries_.end())
        for (auto kv = it->second.rbegin(); kv != it->second.rend(); ++kv)
            if (kv->first == key) return kv->second;
    throw ParseError("missing [" + section + "] " + key);
}

std::string ConfigText::get_or(const std::string& section, const std::string& key, const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

std::vector<std::string> ConfigText::all(const std::string& section, const std::string& key) const {
    std::vector<std::string> out;
    auto it = entries_.find(section);
    if (it == entries_.end()) return out;
    for (const auto& [k, v] : it->second)
        if (k == key) out.push_back(v);
    return out;
}

std::vector<std::string> ConfigText::sections() const {
    std::vector<std::string> out;
    for (const auto& [s, _] : entries_) out.push_back(s);
    return out;
}

std::vector<std::string> ConfigText::keys(const std::string& section) const {
    std::vector<std::string> out;
    auto it = entries_.find(section);
    if (it == entries_.end()) return out;
    for (const auto& [k, _] : it->second) out.push_back(k);
    return out;
}

Method parse_method(const std::string& name) {
    if (name == "impute-then-classify") return Method::impute_then_classify;
    if (name == "indicators") return Method::indicators;
    if (name == "affine") return Method::affine;
    if (name == "clustering") return Method::clustering;
    if (name == "fairmissbag") return Method::fairmissbag;
    throw ParseError("unknown method '" + name + "'");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::impute_then_classify: return "impute-then-classify";
        case Method::indicators: return "indicators";
        case Method::affine: return "affine";
        case Method::clustering: return "clustering";
        case Method::fairmissbag: return "fairmissbag";
    }
    return "?";
}

std::vector<double> default_grid(InterventionSpec::Kind kind) {
    switch (kind) {
        case InterventionSpec::Kind::penalty: return {0.01, 0.1, 1.0, 10.0, 100.0};
        case InterventionSpec::Kind::postprocess: return {0.0, 0.001, 0.01, 0.1, 0.5};
        case InterventionSpec::Kind::none: return {0.0};
    }
    return {0.0};
}

ExperimentConfig ExperimentConfig::from_text(const ConfigText& t, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;

    // [data]
    const auto source = t.get_or("data", "source", "synthetic");
    if (source == "csv") {
        cfg.data.source = DataConfig::Source::csv;
        cfg.data.csv = resolve(base_dir, t.get("data", "path"));
        cfg.data.schema = resolve(base_dir, t.get("data", "schema"));
    } else if (source == "synthetic") {
        cfg.data.source = DataConfig::Source::synthetic;
    } else if (source == "gaussian") {
        cfg.data.source = DataConfig::Source::gaussian;
    } else if (source == "theorem1") {
        cfg.data.source = DataConfig::Source::theorem1;
    } else {
        throw ParseError("[data] source: unknown source '" + source + "'");
    }
    if (t.has("data", "n")) cfg.data.n = to_size("data", "n", t.get("data", "n"));
    if (cfg.data.source == DataConfig::Source::theorem1) {
        const double a0 = to_double("data", "alpha0", t.get_or("data", "alpha0", "0.25"));
        const double a1 = to_double("data", "alpha1", t.get_or("data", "alpha1", std::to_string(a0)));
        const double q0 = to_double("data", "q0", t.get_or("data", "q0", "0.5"));
        cfg.data.theorem1 = {{a0, a1}, {q0, 1.0 - q0}};
        const auto mode = t.get_or("data", "mode", "exact");
        if (mode != "exact" && mode != "sample") throw ParseError("[data] mode: expected exact or sample");
        cfg.data.theorem1_exact = mode == "exact";
        if (t.has("data", "epsilon")) cfg.data.theorem1_epsilons = doubles_of("data", "epsilon", t.get("data", "epsilon"));
    }
    if (t.has("data", "scale")) cfg.data.scale = to_bool("data", "scale", t.get("data", "scale"));
    if (t.has("data", "balance")) {
        const auto& b = t.get("data", "balance");
        if (b == "none") cfg.data.balance = BalanceMode::none;
        else if (b == "group") cfg.data.balance = BalanceMode::group;
        else if (b == "label-then-group") cfg.data.balance = BalanceMode::label_then_group;
        else throw ParseError("[data] balance: expected none, group or label-then-group");
    }

    // [missingness]
    if (t.has("missingness", "entry")) {
        MissingnessSpec spec;
        spec.mechanism = parse_mechanism(t.get_or("missingness", "mechanism", "mcar"));
        for (const auto& e : t.all("missingness", "entry")) spec.entries.push_back(MissingnessSpec::parse_entry(e));
        cfg.missingness = std::move(spec);
    } else if (t.has("missingness", "mechanism")) {
        throw ParseError("[missingness] mechanism given without any entry");
    }
    if (t.has("missingness", "inject_before_split"))
        cfg.inject_before_split = to_bool("missingness", "inject_before_split", t.get("missingness", "inject_before_split"));

    // [method]
    if (t.has("method", "methods")) {
        cfg.methods.clear();
        for (const auto& m : list_of(t.get("method", "methods"))) cfg.methods.push_back(parse_method(m));
    }
    if (t.has("method", "imputer")) cfg.imputer = ImputerSpec::parse(t.get("method", "imputer"));
    if (t.has("method", "knn_k")) cfg.imputer.knn_k = to_size("method", "knn_k", t.get("method", "knn_k"));
    if (t.has("method", "iter_rounds")) cfg.imputer.rounds = to_size("method", "iter_rounds", t.get("method", "iter_rounds"));
    if (t.has("method", "iter_lambda"))
        cfg.imputer.ridge_lambda = to_double("method", "iter_lambda", t.get("method", "iter_lambda"));
    if (t.has("method", "k_min")) {
        cfg.k_min_grid.clear();
        for (const auto& k : list_of(t.get("method", "k_min"))) cfg.k_min_grid.push_back(to_size("method", "k_min", k));
    }
    if (t.has("method", "cluster_alpha"))
        cfg.cluster.alpha = to_double("method", "cluster_alpha", t.get("method", "cluster_alpha"));
    if (t.has("method", "cluster_beta")) cfg.cluster.beta = to_double("method", "cluster_beta", t.get("method", "cluster_beta"));
    if (t.has("method", "cluster_validation"))
        cfg.cluster.validation_fraction = to_double("method", "cluster_validation", t.get("method", "cluster_validation"));
    if (t.has("method", "bags")) cfg.bags = to_size("method", "bags", t.get("method", "bags"));
    if (t.has("method", "ensemble_mode")) cfg.ensemble_mode = parse_ensemble_mode(t.get("method", "ensemble_mode"));

    // [intervention]
    cfg.intervention.kind = InterventionSpec::parse_kind(t.get_or("intervention", "kind", "none"));
    if (t.has("intervention", "constraint"))
        cfg.intervention.penalty.constraint = parse_constraint(t.get("intervention", "constraint"));
    auto& opt = cfg.intervention.penalty.optimizer;
    if (t.has("intervention", "l2")) opt.l2 = to_double("intervention", "l2", t.get("intervention", "l2"));
    if (t.has("intervention", "max_iters"))
        opt.max_iters = to_size("intervention", "max_iters", t.get("intervention", "max_iters"));
    if (t.has("intervention", "tolerance"))
        opt.tolerance = to_double("intervention", "tolerance", t.get("intervention", "tolerance"));
    cfg.intervention_grid = t.has("intervention", "grid") ? doubles_of("intervention", "grid", t.get("intervention", "grid"))
                                                          : default_grid(cfg.intervention.kind);

    // [sweep]
    if (t.has("sweep", "repeats")) cfg.repeats = to_size("sweep", "repeats", t.get("sweep", "repeats"));
    if (t.has("sweep", "test_fraction"))
        cfg.test_fraction = to_double("sweep", "test_fraction", t.get("sweep", "test_fraction"));
    if (t.has("sweep", "seed")) cfg.seed = static_cast<std::uint64_t>(to_ll("sweep", "seed", t.get("sweep", "seed")));

    // [output]
    cfg.output_dir = resolve(base_dir, t.get_or("output", "dir", "out"));
    if (t.has("output", "pareto_disparity"))
        cfg.pareto_disparity = parse_disparity(t.get("output", "pareto_disparity"));
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    const auto text = detail::read_file(path);
    return from_text(ConfigText::parse(text), path.parent_path());
}

void ExperimentConfig::validate() const {
    if (data.source == DataConfig::Source::csv) {
        if (!std::filesystem::exists(data.csv)) throw ParameterError("data file not found: " + data.csv.string());
        if (!std::filesystem::exists(data.schema)) throw ParameterError("schema file not found: " + data.schema.string());
    }
    if (data.source == DataConfig::Source::theorem1) {
        data.theorem1.validate();
        if (data.theorem1_epsilons.empty()) throw ParameterError("theorem1 epsilon list is empty");
        for (double e : data.theorem1_epsilons)
            if (e < 0.0) throw ParameterError("theorem1 epsilon must be >= 0");
    }
    if ((data.source == DataConfig::Source::gaussian ||
         (data.source == DataConfig::Source::theorem1 && !data.theorem1_exact)) && data.n < 10)
        throw ParameterError("[data] n must be at least 10");
    if (repeats < 1) throw ParameterError("repeats must be >= 1");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ParameterError("test_fraction must lie in (0, 1)");
    if (methods.empty()) throw ParameterError("no methods configured");
    if (intervention_grid.empty()) throw ParameterError("intervention grid is empty");
    if (k_min_grid.empty()) throw ParameterError("k_min grid is empty");
    for (double g : intervention_grid)
        if (g < 0.0) throw ParameterError("intervention grid values must be >= 0");
    if (!(cluster.beta >= 0.0 && cluster.beta <= cluster.alpha && cluster.alpha <= 1.0))
        throw ParameterError("cluster bounds need 0 <= beta <= alpha <= 1");
    if (bags < 1) throw ParameterError("bags must be >= 1");
    if (imputer.method == ImputerSpec::Method::knn && imputer.knn_k < 1) throw ParameterError("knn_k must be >= 1");
    if (missingness)
        for (const auto& e : missingness->entries)
            if (!(e.p0 >= 0.0 && e.p0 <= 1.0 && e.p1 >= 0.0 && e.p1 <= 1.0))
                throw ParameterError("missingness probabilities must lie in [0, 1]");
}

}  // namespace fairmiss
