#include "fairmiss/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "fairmiss/error.hpp"
#include "text_util.hpp"

namespace fairmiss {

std::size_t MissingMask::count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

MissingMask Sample::mask() const {
    MissingMask m;
    m.bits.reserve(features.size());
    for (const auto& c : features) m.bits.push_back(c.has_value() ? 0 : 1);
    return m;
}

bool Sample::complete() const {
    return std::all_of(features.begin(), features.end(), [](const Cell& c) { return c.has_value(); });
}

std::string to_string(const CellKey& key) {
    return "(s=" + std::to_string(key.sensitive) + ", y=" + std::to_string(key.label) + ")";
}

Dataset::Dataset(std::vector<Sample> samples, std::vector<std::string> feature_names)
    : samples_(std::move(samples)), feature_names_(std::move(feature_names)) {
    std::set<int> groups;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (s.features.size() != feature_names_.size())
            throw DataError("sample " + std::to_string(i) + " has " +
                            std::to_string(s.features.size()) + " features, expected " +
                            std::to_string(feature_names_.size()));
        if (s.label != 0 && s.label != 1)
            throw SchemaError("sample " + std::to_string(i) + " has non-binary label " +
                              std::to_string(s.label));
        if (s.sensitive < 0)
            throw SchemaError("sample " + std::to_string(i) + " has negative sensitive id");
        groups.insert(s.sensitive);
    }
    groups_.assign(groups.begin(), groups.end());
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.label);
    return out;
}

std::vector<int> Dataset::sensitive() const {
    std::vector<int> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.sensitive);
    return out;
}

std::vector<MissingMask> Dataset::masks() const {
    std::vector<MissingMask> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.mask());
    return out;
}

std::size_t Dataset::feature_index(const std::string& name) const {
    auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
    if (it == feature_names_.end()) throw SchemaError("unknown feature column '" + name + "'");
    return static_cast<std::size_t>(it - feature_names_.begin());
}

std::map<CellKey, std::vector<std::size_t>> Dataset::cells() const {
    std::map<CellKey, std::vector<std::size_t>> out;
    for (int g : groups_)
        for (int y = 0; y <= 1; ++y) out[CellKey{g, y}];
    for (std::size_t i = 0; i < samples_.size(); ++i)
        out[CellKey{samples_[i].sensitive, samples_[i].label}].push_back(i);
    return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
    std::vector<Sample> picked;
    picked.reserve(rows.size());
    for (auto r : rows) picked.push_back(samples_.at(r));
    return Dataset(std::move(picked), feature_names_);
}

Dataset Dataset::with_samples(std::vector<Sample> samples) const {
    return Dataset(std::move(samples), feature_names_);
}

std::size_t Dataset::missing_count() const {
    std::size_t n = 0;
    for (const auto& s : samples_)
        for (const auto& c : s.features) n += c.has_value() ? 0 : 1;
    return n;
}

// ---------------------------------------------------------------------------
// Schema / CSV
// ---------------------------------------------------------------------------

namespace {

ColumnRole parse_role(const std::string& word, std::size_t line) {
    if (word == "feature") return ColumnRole::feature;
    if (word == "sensitive") return ColumnRole::sensitive;
    if (word == "label") return ColumnRole::label;
    if (word == "ignore") return ColumnRole::ignore;
    throw ParseError("schema line " + std::to_string(line) + ": unknown role '" + word + "'");
}

const char* role_name(ColumnRole r) {
    switch (r) {
        case ColumnRole::feature: return "feature";
        case ColumnRole::sensitive: return "sensitive";
        case ColumnRole::label: return "label";
        case ColumnRole::ignore: return "ignore";
    }
    return "ignore";
}

bool is_na(std::string_view token) { return token.empty() || token == "NA"; }

}  // namespace

Schema Schema::parse(const std::string& text) {
    Schema schema;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = detail::strip_comment(raw);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("schema line " + std::to_string(line_no) + ": expected 'column = role'");
        auto key = detail::trim(line.substr(0, eq));
        auto value = detail::trim(line.substr(eq + 1));
        if (key == "@sensitive_values") {
            for (auto& v : detail::split(value, ',')) schema.sensitive_values.push_back(detail::trim(v));
            continue;
        }
        schema.columns.emplace_back(key, parse_role(value, line_no));
    }
    auto count = [&](ColumnRole r) {
        return std::count_if(schema.columns.begin(), schema.columns.end(),
                             [r](const auto& c) { return c.second == r; });
    };
    if (count(ColumnRole::label) != 1) throw SchemaError("schema must name exactly one label column");
    if (count(ColumnRole::sensitive) != 1)
        throw SchemaError("schema must name exactly one sensitive column");
    if (count(ColumnRole::feature) < 1) throw SchemaError("schema must name at least one feature column");
    return schema;
}

Schema Schema::load(const std::filesystem::path& path) { return parse(detail::read_file(path)); }

std::string Schema::to_text() const {
    std::ostringstream out;
    for (const auto& [name, role] : columns) out << name << " = " << role_name(role) << "\n";
    if (!sensitive_values.empty()) {
        out << "@sensitive_values = ";
        for (std::size_t i = 0; i < sensitive_values.size(); ++i)
            out << (i ? ", " : "") << sensitive_values[i];
        out << "\n";
    }
    return out.str();
}

Dataset parse_csv(const std::string& text, const Schema& schema) {
    std::istringstream in(text);
    std::string raw;
    if (!std::getline(in, raw)) throw ParseError("CSV is empty; header row required");
    auto header = detail::split(detail::trim(raw), ',');
    for (auto& h : header) h = detail::trim(h);

    std::vector<ColumnRole> roles(header.size(), ColumnRole::ignore);
    for (std::size_t c = 0; c < header.size(); ++c) {
        auto it = std::find_if(schema.columns.begin(), schema.columns.end(),
                               [&](const auto& col) { return col.first == header[c]; });
        if (it == schema.columns.end())
            throw SchemaError("CSV column '" + header[c] + "' is not named in the schema");
        roles[c] = it->second;
    }
    for (const auto& [name, role] : schema.columns)
        if (std::find(header.begin(), header.end(), name) == header.end())
            throw SchemaError("schema column '" + name + "' is absent from the CSV header");

    std::vector<std::string> feature_names;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (roles[c] == ColumnRole::feature) feature_names.push_back(header[c]);

    std::vector<Sample> samples;
    std::size_t row_no = 1;
    while (std::getline(in, raw)) {
        ++row_no;
        if (detail::trim(raw).empty()) continue;
        auto tokens = detail::split(raw, ',');
        if (tokens.size() != header.size())
            throw ParseError("CSV row " + std::to_string(row_no) + ": expected " +
                             std::to_string(header.size()) + " columns, got " +
                             std::to_string(tokens.size()));
        Sample s;
        for (std::size_t c = 0; c < tokens.size(); ++c) {
            auto tok = detail::trim(tokens[c]);
            switch (roles[c]) {
                case ColumnRole::ignore: break;
                case ColumnRole::feature:
                    if (is_na(tok)) {
                        s.features.emplace_back(std::nullopt);
                    } else {
                        auto v = detail::parse_double(tok);
                        if (!v || !std::isfinite(*v))
                            throw ParseError("CSV row " + std::to_string(row_no) + ", column '" +
                                             header[c] + "': not a number or NA: '" + tok + "'");
                        s.features.emplace_back(*v);
                    }
                    break;
                case ColumnRole::label: {
                    auto v = detail::parse_double(tok);
                    if (!v || (*v != 0.0 && *v != 1.0))
                        throw SchemaError("CSV row " + std::to_string(row_no) +
                                          ": label must be 0 or 1, got '" + tok + "'");
                    s.label = static_cast<int>(*v);
                    break;
                }
                case ColumnRole::sensitive: {
                    if (!schema.sensitive_values.empty()) {
                        auto it = std::find(schema.sensitive_values.begin(),
                                            schema.sensitive_values.end(), tok);
                        if (it == schema.sensitive_values.end())
                            throw SchemaError("CSV row " + std::to_string(row_no) +
                                              ": unknown sensitive value '" + tok + "'");
                        s.sensitive = static_cast<int>(it - schema.sensitive_values.begin());
                    } else {
                        auto v = detail::parse_int(tok);
                        if (!v || *v < 0)
                            throw SchemaError("CSV row " + std::to_string(row_no) +
                                              ": unknown sensitive value '" + tok + "'");
                        s.sensitive = *v;
                    }
                    break;
                }
            }
        }
        samples.push_back(std::move(s));
    }
    return Dataset(std::move(samples), std::move(feature_names));
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema) {
    return parse_csv(detail::read_file(path), schema);
}

std::string to_csv(const Dataset& ds) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& name : ds.feature_names()) out << name << ",";
    out << "s,y\n";
    for (const auto& s : ds.samples()) {
        for (const auto& c : s.features) {
            if (c) out << *c;
            else out << "NA";
            out << ",";
        }
        out << s.sensitive << "," << s.label << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Scaling
// ---------------------------------------------------------------------------

ScaleStats fit_scaler(const Dataset& ds) {
    const auto d = ds.dimension();
    ScaleStats st;
    st.min.assign(d, std::numeric_limits<double>::infinity());
    st.max.assign(d, -std::numeric_limits<double>::infinity());
    for (const auto& s : ds.samples())
        for (std::size_t j = 0; j < d; ++j)
            if (s.features[j]) {
                st.min[j] = std::min(st.min[j], *s.features[j]);
                st.max[j] = std::max(st.max[j], *s.features[j]);
            }
    for (std::size_t j = 0; j < d; ++j)
        if (!std::isfinite(st.min[j]))
            throw DataError("feature '" + ds.feature_names()[j] + "' has no observed values");
    return st;
}

Dataset apply_scaler(const ScaleStats& stats, const Dataset& ds) {
    std::vector<Sample> out = ds.samples();
    for (auto& s : out)
        for (std::size_t j = 0; j < s.features.size(); ++j) {
            if (!s.features[j]) continue;
            const double range = stats.max[j] - stats.min[j];
            s.features[j] = range > 0.0 ? (*s.features[j] - stats.min[j]) / range : 0.0;
        }
    return ds.with_samples(std::move(out));
}

Dataset scale_features(const Dataset& ds) { return apply_scaler(fit_scaler(ds), ds); }

// ---------------------------------------------------------------------------
// Splitting and resampling
// ---------------------------------------------------------------------------

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ParameterError("test_fraction must lie in (0, 1)");
    if (ds.empty()) throw DataError("cannot split an empty dataset");

    auto cells = ds.cells();
    for (const auto& [key, rows] : cells)
        if (rows.size() < 2)
            throw DataError("cell " + to_string(key) + " has fewer than 2 samples; cannot split");

    // Largest-remainder apportionment keeps the total at round(n * f) while each
    // cell stays within one sample of its exact share.
    std::vector<std::size_t> take;
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0, c = 0;
    for (const auto& [key, rows] : cells) {
        const double exact = static_cast<double>(rows.size()) * test_fraction;
        const auto base = static_cast<std::size_t>(std::floor(exact));
        take.push_back(base);
        remainders.emplace_back(exact - static_cast<double>(base), c++);
        assigned += base;
    }
    const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(ds.size()) * test_fraction));
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; assigned < target && r < remainders.size(); ++r, ++assigned)
        ++take[remainders[r].second];

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> train, test;
    c = 0;
    for (const auto& [key, rows] : cells) {
        auto shuffled = rows;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto n_test = std::clamp<std::size_t>(take[c++], 1, rows.size() - 1);
        test.insert(test.end(), shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_test));
        train.insert(train.end(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_test), shuffled.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed) {
    auto [train, test] = split_indices(ds, test_fraction, seed);
    return {ds.subset(train), ds.subset(test)};
}

Dataset fair_resample(const Dataset& ds, std::uint64_t seed) {
    auto cells = ds.cells();
    std::vector<std::size_t> rows;
    rows.reserve(ds.size());
    std::uint64_t c = 0;
    for (const auto& [key, members] : cells) {
        if (members.empty()) throw DataError("cell " + to_string(key) + " is empty; cannot resample");
        std::mt19937_64 rng(seed + c++);
        std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
        for (std::size_t i = 0; i < members.size(); ++i) rows.push_back(members[pick(rng)]);
    }
    return ds.subset(rows);
}

Dataset balance(const Dataset& ds, BalanceMode mode, std::uint64_t seed) {
    if (mode == BalanceMode::none) return ds;
    std::mt19937_64 rng(seed);

    auto downsample = [&rng](const Dataset& in, auto key_of) {
        std::map<int, std::vector<std::size_t>> strata;
        for (std::size_t i = 0; i < in.size(); ++i) strata[key_of(in[i])].push_back(i);
        std::size_t smallest = in.size();
        for (const auto& [k, rows] : strata) smallest = std::min(smallest, rows.size());
        std::vector<std::size_t> keep;
        for (auto& [k, rows] : strata) {
            std::shuffle(rows.begin(), rows.end(), rng);
            keep.insert(keep.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(smallest));
        }
        std::sort(keep.begin(), keep.end());
        return in.subset(keep);
    };

    Dataset out = ds;
    if (mode == BalanceMode::label_then_group)
        out = downsample(out, [](const Sample& s) { return s.label; });
    return downsample(out, [](const Sample& s) { return s.sensitive; });
}

}  // namespace fairmiss
