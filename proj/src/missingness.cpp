#include "fairmiss/missingness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fairmiss/error.hpp"
#include "text_util.hpp"

namespace fairmiss {

// ---------------------------------------------------------------------------
// DiscreteTable
// ---------------------------------------------------------------------------

DiscreteTable::DiscreteTable(std::size_t n_groups, std::vector<std::string> domain)
    : n_groups_(n_groups), domain_(std::move(domain)), p_(n_groups_ * domain_.size() * 2, 0.0) {}

double DiscreteTable::total() const { return std::accumulate(p_.begin(), p_.end(), 0.0); }

double DiscreteTable::cell_mass(std::size_t s, int y) const {
    double m = 0.0;
    for (std::size_t x = 0; x < domain_.size(); ++x) m += at(s, x, y);
    return m;
}

std::size_t DiscreteTable::value_index(const std::string& value) const {
    auto it = std::find(domain_.begin(), domain_.end(), value);
    if (it == domain_.end()) throw ParameterError("value '" + value + "' not in table domain");
    return static_cast<std::size_t>(it - domain_.begin());
}

// ---------------------------------------------------------------------------
// Missingness specification
// ---------------------------------------------------------------------------

Mechanism parse_mechanism(const std::string& name) {
    if (name == "MCAR" || name == "mcar") return Mechanism::mcar;
    if (name == "MAR" || name == "mar") return Mechanism::mar;
    if (name == "MNAR" || name == "mnar") return Mechanism::mnar;
    throw ParameterError("unknown missingness mechanism '" + name + "'");
}

std::string to_string(Mechanism m) {
    switch (m) {
        case Mechanism::mcar: return "MCAR";
        case Mechanism::mar: return "MAR";
        case Mechanism::mnar: return "MNAR";
    }
    return "MCAR";
}

std::string Indicator::to_string() const {
    switch (kind) {
        case Kind::none: return "none";
        case Kind::label: return "label";
        case Kind::sensitive: return "sensitive";
        case Kind::column: return column;
        case Kind::threshold: {
            std::string t = detail::format_double(threshold);
            return column + (greater ? " > " : " < ") + t;
        }
    }
    return "none";
}

MissingnessEntry MissingnessSpec::parse_entry(const std::string& text) {
    auto parts = detail::split(text, '|');
    if (parts.size() != 4)
        throw ParseError("missingness entry '" + text + "': expected 'target | indicator | p0 | p1'");
    MissingnessEntry e;
    e.target = detail::trim(parts[0]);
    const auto ind = detail::trim(parts[1]);
    auto p0 = detail::parse_double(detail::trim(parts[2]));
    auto p1 = detail::parse_double(detail::trim(parts[3]));
    if (!p0 || !p1) throw ParseError("missingness entry '" + text + "': probabilities must be numbers");
    e.p0 = *p0;
    e.p1 = *p1;

    if (ind == "none") {
        e.indicator.kind = Indicator::Kind::none;
    } else if (ind == "label") {
        e.indicator.kind = Indicator::Kind::label;
    } else if (ind == "sensitive") {
        e.indicator.kind = Indicator::Kind::sensitive;
    } else if (auto op = ind.find_first_of("<>"); op != std::string::npos) {
        e.indicator.kind = Indicator::Kind::threshold;
        e.indicator.column = detail::trim(ind.substr(0, op));
        e.indicator.greater = ind[op] == '>';
        auto t = detail::parse_double(detail::trim(ind.substr(op + 1)));
        if (!t) throw ParseError("missingness entry '" + text + "': bad threshold");
        e.indicator.threshold = *t;
    } else {
        e.indicator.kind = Indicator::Kind::column;
        e.indicator.column = ind;
    }
    return e;
}

std::string MissingnessSpec::entry_text(const MissingnessEntry& e) const {
    return e.target + " | " + e.indicator.to_string() + " | " + detail::format_double(e.p0) +
           " | " + detail::format_double(e.p1);
}

void MissingnessSpec::validate(const Dataset& ds) const {
    for (const auto& e : entries) {
        const auto where = "missingness entry for '" + e.target + "'";
        if (!(e.p0 >= 0.0 && e.p0 <= 1.0 && e.p1 >= 0.0 && e.p1 <= 1.0))
            throw ParameterError(where + ": probabilities must lie in [0, 1]");
        const auto target = ds.feature_index(e.target);
        const auto& ind = e.indicator;
        const bool on_column = ind.kind == Indicator::Kind::column || ind.kind == Indicator::Kind::threshold;
        std::size_t col = 0;
        if (on_column) col = ds.feature_index(ind.column);

        switch (mechanism) {
            case Mechanism::mcar:
                if (ind.kind != Indicator::Kind::none || e.p0 != e.p1)
                    throw ParameterError(where + ": MCAR entries need indicator 'none' and p0 == p1");
                break;
            case Mechanism::mar:
                if (ind.kind == Indicator::Kind::label)
                    throw ParameterError(where + ": MAR missingness cannot depend on the label");
                if (on_column && col == target)
                    throw ParameterError(where + ": MAR missingness cannot depend on the hidden value");
                break;
            case Mechanism::mnar: break;
        }
        if (on_column && col != target && mechanism == Mechanism::mar)
            for (const auto& s : ds.samples())
                if (!s.features[col])
                    throw DataError(where + ": conditioning column '" + ind.column +
                                    "' must be fully observed");
    }
}

Dataset inject_missing(const Dataset& ds, const MissingnessSpec& spec, std::uint64_t seed) {
    spec.validate(ds);
    struct Resolved {
        std::size_t target;
        std::size_t column;
        const MissingnessEntry* entry;
    };
    std::vector<Resolved> resolved;
    for (const auto& e : spec.entries) {
        const bool on_column = e.indicator.kind == Indicator::Kind::column ||
                               e.indicator.kind == Indicator::Kind::threshold;
        resolved.push_back({ds.feature_index(e.target), on_column ? ds.feature_index(e.indicator.column) : 0, &e});
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Sample> out = ds.samples();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Sample& before = ds[i];
        for (const auto& r : resolved) {
            const double u = unif(rng);
            if (!before.features[r.target]) continue;
            const auto& ind = r.entry->indicator;
            bool on = false;
            switch (ind.kind) {
                case Indicator::Kind::none: break;
                case Indicator::Kind::label: on = before.label == 1; break;
                case Indicator::Kind::sensitive: on = before.sensitive != 0; break;
                case Indicator::Kind::column:
                case Indicator::Kind::threshold: {
                    const auto& v = before.features[r.column];
                    if (!v)
                        throw DataError("row " + std::to_string(i) + ": conditioning column '" +
                                        ind.column + "' is NA");
                    if (ind.kind == Indicator::Kind::column) on = *v != 0.0;
                    else on = ind.greater ? *v > ind.threshold : *v < ind.threshold;
                    break;
                }
            }
            if (u < (on ? r.entry->p1 : r.entry->p0)) out[i].features[r.target].reset();
        }
    }
    return ds.with_samples(std::move(out));
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

Dataset gen_synthetic(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Sample> rows;
    rows.reserve(2400);

    const double sd_present = std::sqrt(2.0);
    const double sd_missing = std::sqrt(3.0);
    struct Cell { int y, s; double mx1, mx2; int n_present, n_missing; double mx1_missing; };
    // Label 1 sits at X1 = -3 when X2 is present and at X1 = +3 when it is hidden.
    const Cell cells[] = {
        {1, 1, -3.0, -3.0, 400, 100, 3.0},
        {1, 0, -3.0, 3.0, 400, 300, 3.0},
        {0, 1, 3.0, -3.0, 400, 100, -3.0},
        {0, 0, 3.0, 3.0, 400, 300, -3.0},
    };
    for (const auto& c : cells)
        for (int i = 0; i < c.n_present; ++i) {
            Sample s;
            s.features = {c.mx1 + sd_present * normal(rng), c.mx2 + sd_present * normal(rng)};
            s.sensitive = c.s;
            s.label = c.y;
            rows.push_back(std::move(s));
        }
    for (const auto& c : cells)
        for (int i = 0; i < c.n_missing; ++i) {
            Sample s;
            s.features = {c.mx1_missing + sd_missing * normal(rng), std::nullopt};
            s.sensitive = c.s;
            s.label = c.y;
            rows.push_back(std::move(s));
        }
    return Dataset(std::move(rows), {"x1", "x2"});
}

Dataset gen_gaussian_benchmark(std::size_t n, std::uint64_t seed) {
    constexpr std::size_t d = 5;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double signal[d] = {0.6, 0.3, 0.3, 0.2, 0.2};
    const double group_shift[d] = {0.0, 0.5, -0.5, 0.3, 0.0};

    std::vector<Sample> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        s.sensitive = unif(rng) < 0.5 ? 1 : 0;
        s.label = unif(rng) < (s.sensitive ? 0.6 : 0.4) ? 1 : 0;
        const double sign = s.label ? 1.0 : -1.0;
        for (std::size_t j = 0; j < d; ++j)
            s.features.emplace_back(sign * signal[j] + group_shift[j] * s.sensitive + normal(rng));
        rows.push_back(std::move(s));
    }
    return Dataset(std::move(rows), {"x1", "x2", "x3", "x4", "x5"});
}

// ---------------------------------------------------------------------------
// Single-feature construction
// ---------------------------------------------------------------------------

double Theorem1Distribution::alpha() const {
    double a = 0.0;
    for (std::size_t s = 0; s < alpha_s.size(); ++s) a += alpha_s[s] * q_s[s];
    return a;
}

void Theorem1Distribution::validate() const {
    if (alpha_s.empty() || alpha_s.size() != q_s.size())
        throw ParameterError("alpha_s and q_s must be non-empty and of equal length");
    double qsum = 0.0;
    for (std::size_t s = 0; s < q_s.size(); ++s) {
        if (!(q_s[s] >= 0.0)) throw ParameterError("group priors must be non-negative");
        if (!(alpha_s[s] >= 0.0 && alpha_s[s] <= 1.0))
            throw ParameterError("alpha_s must lie in [0, 1]");
        qsum += q_s[s];
    }
    if (std::abs(qsum - 1.0) > 1e-12) throw ParameterError("group priors must sum to 1");
    if (!(alpha() < 1.0 / 3.0))
        throw ParameterError("mixture alpha must be < 1/3 for the accuracy-gap construction");
}

DiscreteTable exact_theorem1(const Theorem1Distribution& dist) {
    dist.validate();
    DiscreteTable t(dist.alpha_s.size(), {"0", "1", "NA"});
    for (std::size_t s = 0; s < dist.alpha_s.size(); ++s) {
        const double a = dist.alpha_s[s], q = dist.q_s[s];
        t.at(s, 0, 0) = q * (1.0 - a) / 2.0;
        t.at(s, 1, 0) = q * (1.0 - a) / 2.0;
        t.at(s, 2, 1) = q * a;
    }
    return t;
}

Dataset gen_theorem1(const Theorem1Distribution& dist, std::size_t n, std::uint64_t seed) {
    const auto table = exact_theorem1(dist);
    std::vector<double> weights;
    struct Outcome { int s; std::size_t x; int y; };
    std::vector<Outcome> outcomes;
    for (std::size_t s = 0; s < table.groups(); ++s)
        for (std::size_t x = 0; x < table.domain_size(); ++x)
            for (int y = 0; y <= 1; ++y) {
                outcomes.push_back({static_cast<int>(s), x, y});
                weights.push_back(table.at(s, x, y));
            }
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> draw(weights.begin(), weights.end());
    std::vector<Sample> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& o = outcomes[draw(rng)];
        Sample s;
        s.features = {o.x == 2 ? Cell{} : Cell{static_cast<double>(o.x)}};
        s.sensitive = o.s;
        s.label = o.y;
        rows.push_back(std::move(s));
    }
    return Dataset(std::move(rows), {"x"});
}

}  // namespace fairmiss
