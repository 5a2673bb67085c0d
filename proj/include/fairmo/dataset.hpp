#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fairmo/csv.hpp"
#include "fairmo/error.hpp"
#include "fairmo/rng.hpp"

namespace fairmo {

// Group membership convention: 0 = protected, 1 = non-protected.
inline constexpr int protected_group = 0;
inline constexpr int non_protected_group = 1;

struct CategoryRule {
    // Exactly one of the two sets is non-empty; the other side is "everything else".
    std::set<std::string> protected_values;
    std::set<std::string> non_protected_values;
};

struct NumericRangeRule {
    double lo = 0.0;
    double hi = 0.0;
    // Which group the inclusive range [lo, hi] denotes.
    int range_group = non_protected_group;
};

struct ProtectedGroupRule {
    std::variant<CategoryRule, NumericRangeRule> rule;

    int apply(const std::string& value) const
    {
        if (const auto* c = std::get_if<CategoryRule>(&rule)) {
            if (!c->protected_values.empty()) {
                return c->protected_values.contains(value) ? protected_group : non_protected_group;
            }
            return c->non_protected_values.contains(value) ? non_protected_group : protected_group;
        }
        const auto& r = std::get<NumericRangeRule>(rule);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size()) {
            throw DataError("non-numeric value '" + value + "' for numeric-range rule");
        }
        const bool in_range = v >= r.lo && v <= r.hi;
        return in_range ? r.range_group : 1 - r.range_group;
    }
};

// categorical: one indicator per level except the first (sorted) one.
// ordinal: a single column holding the level's rank in sorted order.
enum class FeatureType { numeric, categorical, ordinal };

struct FeatureColumn {
    std::string column;
    FeatureType type = FeatureType::numeric;
};

struct OutcomeMapping {
    std::string column;
    std::set<std::string> positive;
    std::set<std::string> negative;
};

struct SensitiveSpec {
    std::string name;
    std::string column;
    ProtectedGroupRule rule;
};

struct DatasetSchema {
    std::string name;
    std::string file;
    char delimiter = ',';
    std::set<std::string> missing_tokens{"", "?"};
    std::vector<FeatureColumn> features;
    OutcomeMapping outcome;
    std::vector<SensitiveSpec> sensitive;

    void validate() const
    {
        if (features.empty()) {
            throw SchemaError("schema '" + name + "': no feature columns");
        }
        if (outcome.column.empty() || outcome.positive.empty() || outcome.negative.empty()) {
            throw SchemaError("schema '" + name + "': outcome needs a column and positive/negative values");
        }
        for (const auto& v : outcome.positive) {
            if (outcome.negative.contains(v)) {
                throw SchemaError("schema '" + name + "': outcome value '" + v + "' is both positive and negative");
            }
        }
        std::set<std::string> columns;
        std::set<std::string> names;
        for (const auto& s : sensitive) {
            if (!columns.insert(s.column).second) {
                throw SchemaError("schema '" + name + "': sensitive column '" + s.column + "' listed twice");
            }
            if (!names.insert(s.name).second) {
                throw SchemaError("schema '" + name + "': sensitive attribute '" + s.name + "' listed twice");
            }
        }
    }
};

inline ProtectedGroupRule rule_from_json(const nlohmann::json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "category-equals") {
        CategoryRule c;
        if (j.contains("protected")) {
            c.protected_values = j.at("protected").get<std::set<std::string>>();
        }
        if (j.contains("non_protected")) {
            c.non_protected_values = j.at("non_protected").get<std::set<std::string>>();
        }
        if (c.protected_values.empty() == c.non_protected_values.empty()) {
            throw SchemaError("category-equals rule needs exactly one of 'protected' or 'non_protected'");
        }
        return {c};
    }
    if (kind == "numeric-range") {
        NumericRangeRule r;
        r.lo = j.at("lo").get<double>();
        r.hi = j.at("hi").get<double>();
        const auto side = j.value("range_group", std::string("non-protected"));
        if (side == "protected") {
            r.range_group = protected_group;
        } else if (side == "non-protected") {
            r.range_group = non_protected_group;
        } else {
            throw SchemaError("numeric-range rule: unknown range_group '" + side + "'");
        }
        if (r.lo > r.hi) {
            throw SchemaError("numeric-range rule: lo > hi");
        }
        return {r};
    }
    throw SchemaError("unknown protected-group rule kind '" + kind + "'");
}

inline DatasetSchema schema_from_json(const nlohmann::json& j)
{
    try {
        DatasetSchema s;
        s.name = j.at("name").get<std::string>();
        s.file = j.value("file", s.name + ".csv");
        const auto delim = j.value("delimiter", std::string(","));
        if (delim.size() != 1) {
            throw SchemaError("delimiter must be a single character");
        }
        s.delimiter = delim.front();
        if (j.contains("missing")) {
            s.missing_tokens = j.at("missing").get<std::set<std::string>>();
        }
        for (const auto& f : j.at("features")) {
            FeatureColumn fc;
            fc.column = f.at("column").get<std::string>();
            const auto type = f.value("type", std::string("numeric"));
            if (type == "numeric") {
                fc.type = FeatureType::numeric;
            } else if (type == "categorical") {
                fc.type = FeatureType::categorical;
            } else if (type == "ordinal") {
                fc.type = FeatureType::ordinal;
            } else {
                throw SchemaError("feature '" + fc.column + "': unknown type '" + type + "'");
            }
            s.features.push_back(std::move(fc));
        }
        const auto& o = j.at("outcome");
        s.outcome.column = o.at("column").get<std::string>();
        s.outcome.positive = o.at("positive").get<std::set<std::string>>();
        s.outcome.negative = o.at("negative").get<std::set<std::string>>();
        for (const auto& a : j.value("sensitive", nlohmann::json::array())) {
            s.sensitive.push_back({a.at("name").get<std::string>(), a.at("column").get<std::string>(),
                                   rule_from_json(a.at("rule"))});
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed schema: ") + e.what());
    }
}

inline DatasetSchema load_schema(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open schema " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return schema_from_json(j);
}

struct Dataset {
    std::string name;
    Eigen::MatrixXd X;
    std::vector<int> y;                             // in {-1, +1}
    std::map<std::string, std::vector<int>> z_attrs; // in {0, 1}
    std::vector<std::string> attribute_names;       // schema order
    std::vector<std::string> feature_names;
    std::size_t dropped_rows = 0;

    std::size_t rows() const noexcept { return y.size(); }
    std::size_t features() const noexcept { return static_cast<std::size_t>(X.cols()); }

    const std::vector<int>& z(const std::string& attr) const
    {
        const auto it = z_attrs.find(attr);
        if (it == z_attrs.end()) {
            throw SchemaError("unknown sensitive attribute '" + attr + "' in dataset '" + name + "'");
        }
        return it->second;
    }

    bool has_attribute(const std::string& attr) const { return z_attrs.contains(attr); }

    // Throws DegenerateGroupError if any attribute has a single group present.
    void require_both_groups(const std::string& context) const
    {
        for (const auto& [attr, z] : z_attrs) {
            const auto ones = std::count(z.begin(), z.end(), 1);
            if (ones == 0 || ones == static_cast<std::ptrdiff_t>(z.size())) {
                throw DegenerateGroupError(context + ": attribute '" + attr + "' has a single group");
            }
        }
    }

    void validate() const
    {
        const auto n = rows();
        if (static_cast<std::size_t>(X.rows()) != n) {
            throw DimensionError("dataset '" + name + "': X rows differ from label count");
        }
        if (feature_names.size() != features()) {
            throw DimensionError("dataset '" + name + "': feature name count differs from X columns");
        }
        for (const auto& [attr, z] : z_attrs) {
            if (z.size() != n) {
                throw DimensionError("dataset '" + name + "': attribute '" + attr + "' length mismatch");
            }
        }
        if (!X.allFinite()) {
            throw DataError("dataset '" + name + "': non-finite feature value");
        }
    }
};

struct LoadOptions {
    // Exclude the sensitive columns from the feature matrix.
    bool drop_sensitive = false;
};

namespace detail {

inline std::optional<double> parse_double(const std::string& s)
{
    std::size_t used = 0;
    try {
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) {
            return v;
        }
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

} // namespace detail

inline Dataset load_dataset(const csv::Table& table, const DatasetSchema& schema, const LoadOptions& opts = {})
{
    schema.validate();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        index.emplace(table.header[i], i);
    }
    auto column_index = [&](const std::string& col) {
        const auto it = index.find(col);
        if (it == index.end()) {
            throw SchemaError("dataset '" + schema.name + "': missing column '" + col + "'");
        }
        return it->second;
    };

    std::set<std::string> sensitive_columns;
    for (const auto& s : schema.sensitive) {
        sensitive_columns.insert(s.column);
    }
    std::vector<FeatureColumn> features;
    for (const auto& f : schema.features) {
        if (!(opts.drop_sensitive && sensitive_columns.contains(f.column))) {
            features.push_back(f);
        }
    }
    if (features.empty()) {
        throw SchemaError("dataset '" + schema.name + "': no feature columns left");
    }

    const std::size_t outcome_idx = column_index(schema.outcome.column);
    std::vector<std::size_t> feature_idx;
    for (const auto& f : features) {
        feature_idx.push_back(column_index(f.column));
    }
    std::vector<std::size_t> sensitive_idx;
    for (const auto& s : schema.sensitive) {
        sensitive_idx.push_back(column_index(s.column));
    }

    std::vector<std::size_t> used = feature_idx;
    used.push_back(outcome_idx);
    used.insert(used.end(), sensitive_idx.begin(), sensitive_idx.end());

    // First pass: keep complete rows, map outcomes and groups, collect category levels.
    std::vector<const std::vector<std::string>*> kept;
    Dataset ds;
    ds.name = schema.name;
    for (const auto& s : schema.sensitive) {
        ds.attribute_names.push_back(s.name);
        ds.z_attrs[s.name];
    }
    std::vector<std::set<std::string>> levels(features.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != table.header.size()) {
            throw DataError("dataset '" + schema.name + "': row " + std::to_string(r) + " has " +
                            std::to_string(row.size()) + " fields, expected " +
                            std::to_string(table.header.size()));
        }
        const bool incomplete = std::any_of(used.begin(), used.end(), [&](std::size_t c) {
            return schema.missing_tokens.contains(row[c]);
        });
        if (incomplete) {
            ++ds.dropped_rows;
            continue;
        }
        const auto& label = row[outcome_idx];
        if (schema.outcome.positive.contains(label)) {
            ds.y.push_back(1);
        } else if (schema.outcome.negative.contains(label)) {
            ds.y.push_back(-1);
        } else {
            throw DataError("dataset '" + schema.name + "': row " + std::to_string(r) + ": outcome value '" +
                            label + "' outside mapping");
        }
        for (std::size_t k = 0; k < schema.sensitive.size(); ++k) {
            try {
                ds.z_attrs[schema.sensitive[k].name].push_back(schema.sensitive[k].rule.apply(row[sensitive_idx[k]]));
            } catch (const DataError& e) {
                throw DataError("dataset '" + schema.name + "': row " + std::to_string(r) + ": " + e.what());
            }
        }
        for (std::size_t k = 0; k < features.size(); ++k) {
            if (features[k].type != FeatureType::numeric) {
                levels[k].insert(row[feature_idx[k]]);
            }
        }
        kept.push_back(&row);
    }

    std::vector<std::size_t> offset(features.size());
    std::vector<std::vector<std::string>> kept_levels(features.size());
    std::size_t width = 0;
    for (std::size_t k = 0; k < features.size(); ++k) {
        offset[k] = width;
        if (features[k].type == FeatureType::numeric) {
            ds.feature_names.push_back(features[k].column);
            ++width;
        } else if (features[k].type == FeatureType::ordinal) {
            kept_levels[k].assign(levels[k].begin(), levels[k].end());
            ds.feature_names.push_back(features[k].column);
            ++width;
        } else {
            kept_levels[k].assign(std::next(levels[k].begin(), levels[k].empty() ? 0 : 1), levels[k].end());
            for (const auto& level : kept_levels[k]) {
                ds.feature_names.push_back(features[k].column + "=" + level);
            }
            width += kept_levels[k].size();
        }
    }

    ds.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < kept.size(); ++r) {
        const auto& row = *kept[r];
        const auto ri = static_cast<Eigen::Index>(r);
        for (std::size_t k = 0; k < features.size(); ++k) {
            const auto& value = row[feature_idx[k]];
            if (features[k].type == FeatureType::numeric) {
                const auto v = detail::parse_double(value);
                if (!v) {
                    throw DataError("dataset '" + schema.name + "': column '" + features[k].column +
                                    "': non-numeric value '" + value + "'");
                }
                ds.X(ri, static_cast<Eigen::Index>(offset[k])) = *v;
            } else if (features[k].type == FeatureType::ordinal) {
                const auto& lv = kept_levels[k];
                const auto it = std::lower_bound(lv.begin(), lv.end(), value);
                ds.X(ri, static_cast<Eigen::Index>(offset[k])) = static_cast<double>(it - lv.begin());
            } else {
                const auto& lv = kept_levels[k];
                const auto it = std::lower_bound(lv.begin(), lv.end(), value);
                if (it != lv.end() && *it == value) {
                    ds.X(ri, static_cast<Eigen::Index>(offset[k] + static_cast<std::size_t>(it - lv.begin()))) = 1.0;
                }
            }
        }
    }

    ds.validate();
    ds.require_both_groups("dataset '" + schema.name + "'");
    return ds;
}

inline Dataset load_dataset(const std::string& path, const DatasetSchema& schema, const LoadOptions& opts = {})
{
    return load_dataset(csv::read_file(path, schema.delimiter), schema, opts);
}

// Row subset in the given order.
inline Dataset take_rows(const Dataset& ds, std::span<const std::size_t> rows)
{
    Dataset out;
    out.name = ds.name;
    out.attribute_names = ds.attribute_names;
    out.feature_names = ds.feature_names;
    std::vector<Eigen::Index> idx(rows.begin(), rows.end());
    out.X = ds.X(idx, Eigen::all);
    out.y.reserve(rows.size());
    for (auto r : rows) {
        out.y.push_back(ds.y.at(r));
    }
    for (const auto& [attr, z] : ds.z_attrs) {
        auto& dst = out.z_attrs[attr];
        dst.reserve(rows.size());
        for (auto r : rows) {
            dst.push_back(z[r]);
        }
    }
    return out;
}

// Uniformly random permutation of 0..n-1 (Fisher-Yates with unbiased bounded draws).
inline std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed)
{
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(perm[i - 1], perm[pick(rng)]);
    }
    return perm;
}

struct SplitResult {
    Dataset train;
    Dataset test;
};

inline SplitResult split(const Dataset& ds, double train_fraction, std::uint64_t seed)
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ContractError("split: train fraction must lie in (0, 1)");
    }
    const auto n = ds.rows();
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n) {
        throw DegenerateGroupError("split: one side would be empty");
    }
    const auto perm = random_permutation(n, seed);
    const std::span<const std::size_t> all(perm);
    SplitResult out{take_rows(ds, all.first(n_train)), take_rows(ds, all.subspan(n_train))};
    out.train.require_both_groups("split (train)");
    out.test.require_both_groups("split (test)");
    return out;
}

// Per-column affine map fit on training data.
struct Standardizer {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd scale;

    static Standardizer fit(const Eigen::MatrixXd& X)
    {
        if (X.rows() == 0) {
            throw ContractError("standardize: empty training data");
        }
        Standardizer s;
        s.mean = X.colwise().mean();
        s.scale = Eigen::RowVectorXd::Ones(X.cols());
        const auto n = static_cast<double>(X.rows());
        for (Eigen::Index c = 0; c < X.cols(); ++c) {
            const double var = (X.col(c).array() - s.mean(c)).square().sum() / n;
            const double sd = std::sqrt(var);
            // zero-variance columns keep scale 1
            if (sd > 1e-12 * std::max(1.0, std::abs(s.mean(c)))) {
                s.scale(c) = sd;
            }
        }
        return s;
    }

    Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const
    {
        return (X.rowwise() - mean).array().rowwise() / scale.array();
    }
};

inline std::pair<Dataset, Dataset> standardize(const Dataset& train, const Dataset& test)
{
    const auto s = Standardizer::fit(train.X);
    std::pair<Dataset, Dataset> out{train, test};
    out.first.X = s.apply(train.X);
    if (test.X.size() > 0) {
        out.second.X = s.apply(test.X);
    }
    return out;
}

inline Dataset subsample(const Dataset& ds, std::size_t factor, std::uint64_t seed)
{
    if (factor < 1) {
        throw ContractError("subsample: factor must be >= 1");
    }
    const auto n = ds.rows();
    const auto keep = (n + factor - 1) / factor;
    auto perm = random_permutation(n, seed);
    perm.resize(keep);
    std::sort(perm.begin(), perm.end());
    auto out = take_rows(ds, perm);
    out.dropped_rows = ds.dropped_rows;
    out.require_both_groups("subsample");
    return out;
}

// Outcome counts per group for one sensitive attribute.
struct GroupOutcomeTable {
    std::string attribute;
    // counts[group][outcome], outcome 0 = y=-1, 1 = y=+1
    std::array<std::array<std::size_t, 2>, 2> counts{};

    std::size_t group_total(int g) const { return counts[g][0] + counts[g][1]; }
    std::size_t outcome_total(int o) const { return counts[0][o] + counts[1][o]; }
    std::size_t total() const { return group_total(0) + group_total(1); }

    // Row percentage of outcome o within group g (0..100).
    double percent(int g, int o) const
    {
        const auto t = group_total(g);
        return t == 0 ? 0.0 : 100.0 * static_cast<double>(counts[g][o]) / static_cast<double>(t);
    }

    double overall_percent(int o) const
    {
        const auto t = total();
        return t == 0 ? 0.0 : 100.0 * static_cast<double>(outcome_total(o)) / static_cast<double>(t);
    }
};

inline GroupOutcomeTable summarize(const Dataset& ds, const std::string& attr)
{
    const auto& z = ds.z(attr);
    GroupOutcomeTable t;
    t.attribute = attr;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        ++t.counts[z[i]][ds.y[i] > 0 ? 1 : 0];
    }
    return t;
}

} // namespace fairmo
