#pragma once

#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "fairmo/dataset.hpp"
#include "fairmo/error.hpp"
#include "fairmo/experiments.hpp"

namespace fairmo {

// single:  one attribute, DI/EO/DM as separate objectives
// multi:   two attributes, DI/EO/DM each collapsed to the max over attributes
// dual-dm: two attributes, DM (OMR) per attribute, uncollapsed
// custom:  measures/collapse given explicitly
enum class StudyKind { single, multi, dual_dm, custom };

inline StudyKind parse_study_kind(const std::string& s)
{
    if (s == "single") {
        return StudyKind::single;
    }
    if (s == "multi") {
        return StudyKind::multi;
    }
    if (s == "dual-dm") {
        return StudyKind::dual_dm;
    }
    if (s == "custom") {
        return StudyKind::custom;
    }
    throw SchemaError("unknown study kind '" + s + "' (expected single, multi, dual-dm or custom)");
}

inline std::string to_string(StudyKind k)
{
    switch (k) {
    case StudyKind::single:
        return "single";
    case StudyKind::multi:
        return "multi";
    case StudyKind::dual_dm:
        return "dual-dm";
    case StudyKind::custom:
        return "custom";
    }
    return "?";
}

inline FeasibilitySplit parse_feasibility_split(const std::string& s)
{
    if (s == "train") {
        return FeasibilitySplit::train;
    }
    if (s == "test") {
        return FeasibilitySplit::test;
    }
    throw SchemaError("feasibility split must be 'train' or 'test', got '" + s + "'");
}

inline std::string to_string(FeasibilitySplit f)
{
    return f == FeasibilitySplit::train ? "train" : "test";
}

struct StudyFile {
    std::string name;
    StudyKind kind = StudyKind::single;
    StudyConfig cfg;
    bool drop_sensitive = false;
    double bucket_width = 0.02;
    std::size_t bucket_objective = 0;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where)
{
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw SchemaError(where + ": unknown key '" + key + "'");
        }
    }
}

inline StrategyOverrides read_strategy(const nlohmann::json& j)
{
    reject_unknown_keys(j, {"p_target", "damping", "c_success", "c_path", "c_cov", "p_threshold"}, "ea.strategy");
    StrategyOverrides o;
    auto get = [&](const char* key, std::optional<double>& slot) {
        if (j.contains(key)) {
            slot = j.at(key).get<double>();
        }
    };
    get("p_target", o.p_target);
    get("damping", o.damping);
    get("c_success", o.c_success);
    get("c_path", o.c_path);
    get("c_cov", o.c_cov);
    get("p_threshold", o.p_threshold);
    return o;
}

} // namespace detail

// `full_scale` selects the paper-scale overrides stored under the "full_scale" key.
inline StudyFile study_from_json(nlohmann::json j, bool full_scale = false)
{
    try {
        if (full_scale) {
            if (!j.contains("full_scale")) {
                throw SchemaError("study config has no full_scale section");
            }
            j.merge_patch(j.at("full_scale"));
        }
        j.erase("full_scale");
        detail::reject_unknown_keys(j,
                                    {"name", "dataset", "study", "attributes", "measures", "collapse", "threshold", "runs",
                                     "seed", "train_fraction", "feasibility_split", "subsample", "warm_start", "threads",
                                     "drop_sensitive", "ea", "baseline", "plot", "comment"},
                                    "study config");
        StudyFile f;
        f.cfg.dataset = j.at("dataset").get<std::string>();
        f.name = j.value("name", f.cfg.dataset);
        f.kind = parse_study_kind(j.value("study", "single"));
        const auto attrs = j.at("attributes").get<std::vector<std::string>>();
        switch (f.kind) {
        case StudyKind::single:
            if (attrs.size() != 1) {
                throw SchemaError("single-attribute study needs exactly one attribute");
            }
            f.cfg = single_attribute_config(attrs[0], f.cfg);
            break;
        case StudyKind::multi:
            if (attrs.size() != 2) {
                throw SchemaError("multi-attribute study requires two sensitive attributes");
            }
            f.cfg = multi_attribute_config(attrs[0], attrs[1], f.cfg);
            break;
        case StudyKind::dual_dm:
            if (attrs.size() != 2) {
                throw SchemaError("dual-DM study requires two sensitive attributes");
            }
            f.cfg = dual_dm_config(attrs[0], attrs[1], f.cfg);
            break;
        case StudyKind::custom:
            f.cfg.spec.attributes = attrs;
            f.cfg.spec.measures.clear();
            for (const auto& m : j.at("measures")) {
                f.cfg.spec.measures.push_back(parse_bias_measure(m.get<std::string>()));
            }
            f.cfg.spec.collapse = j.value("collapse", false);
            break;
        }
        if (f.kind != StudyKind::custom && (j.contains("measures") || j.contains("collapse"))) {
            throw SchemaError("measures/collapse are fixed by the study kind; use \"study\": \"custom\"");
        }
        f.cfg.spec.threshold = j.value("threshold", 0.01);
        f.cfg.runs = j.value("runs", f.cfg.runs);
        f.cfg.seed = j.value("seed", f.cfg.seed);
        f.cfg.train_fraction = j.value("train_fraction", f.cfg.train_fraction);
        f.cfg.feasibility = parse_feasibility_split(j.value("feasibility_split", std::string("train")));
        f.cfg.subsample = j.value("subsample", f.cfg.subsample);
        f.cfg.warm_start = j.value("warm_start", f.cfg.warm_start);
        f.cfg.threads = j.value("threads", f.cfg.threads);
        f.drop_sensitive = j.value("drop_sensitive", false);

        if (j.contains("ea")) {
            const auto& e = j.at("ea");
            detail::reject_unknown_keys(e,
                                        {"population", "generations", "initial_sigma", "archive_capacity",
                                         "reference_value", "init_jitter", "strategy"},
                                        "ea");
            auto& ea = f.cfg.ea;
            ea.population = e.value("population", ea.population);
            ea.generations = e.value("generations", ea.generations);
            ea.initial_sigma = e.value("initial_sigma", ea.initial_sigma);
            ea.archive_capacity = e.value("archive_capacity", ea.archive_capacity);
            ea.reference_value = e.value("reference_value", ea.reference_value);
            ea.init_jitter = e.value("init_jitter", ea.init_jitter);
            if (e.contains("strategy")) {
                f.cfg.ea.strategy = detail::read_strategy(e.at("strategy"));
            }
        }
        if (j.contains("baseline")) {
            const auto& b = j.at("baseline");
            detail::reject_unknown_keys(b, {"learning_rate", "warmup_epochs", "max_epochs", "tolerance", "l2"},
                                        "baseline");
            auto& t = f.cfg.baseline;
            t.learning_rate = b.value("learning_rate", t.learning_rate);
            t.warmup_epochs = b.value("warmup_epochs", t.warmup_epochs);
            t.max_epochs = b.value("max_epochs", t.max_epochs);
            t.tolerance = b.value("tolerance", t.tolerance);
            t.l2 = b.value("l2", t.l2);
        }
        if (j.contains("plot")) {
            const auto& p = j.at("plot");
            detail::reject_unknown_keys(p, {"bucket_width", "bucket_objective"}, "plot");
            f.bucket_width = p.value("bucket_width", f.bucket_width);
            f.bucket_objective = p.value("bucket_objective", f.bucket_objective);
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed study config: ") + e.what());
    }
}

inline StudyFile load_study_file(const std::string& path, bool full_scale = false)
{
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open study config " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return study_from_json(std::move(j), full_scale);
}

// Checks the study against the dataset's schema before any data is read.
inline void check_study_against_schema(const StudyFile& f, const DatasetSchema& schema)
{
    f.cfg.spec.validate();
    if (f.cfg.spec.attributes.size() == 2 && schema.sensitive.size() < 2) {
        throw SchemaError("study '" + f.name + "' requires two sensitive attributes; dataset '" + schema.name +
                          "' has " + std::to_string(schema.sensitive.size()));
    }
    for (const auto& a : f.cfg.spec.attributes) {
        const bool known = std::any_of(schema.sensitive.begin(), schema.sensitive.end(),
                                       [&](const SensitiveSpec& s) { return s.name == a; });
        if (!known) {
            throw SchemaError("dataset '" + schema.name + "' has no sensitive attribute '" + a + "'");
        }
    }
    if (f.cfg.runs < 1) {
        throw SchemaError("study '" + f.name + "': runs must be >= 1");
    }
    if (f.cfg.subsample < 1) {
        throw SchemaError("study '" + f.name + "': subsample factor must be >= 1");
    }
    if (!(f.cfg.train_fraction > 0.0 && f.cfg.train_fraction < 1.0)) {
        throw SchemaError("study '" + f.name + "': train_fraction must lie in (0, 1)");
    }
    f.cfg.ea.validate();
    f.cfg.baseline.validate();
}

inline nlohmann::json to_json(const StudyFile& f)
{
    const auto& c = f.cfg;
    nlohmann::json ea{{"population", c.ea.population},
                      {"generations", c.ea.generations},
                      {"initial_sigma", c.ea.initial_sigma},
                      {"archive_capacity", c.ea.archive_capacity},
                      {"reference_value", c.ea.reference_value},
                      {"init_jitter", c.ea.init_jitter}};
    nlohmann::json strategy = nlohmann::json::object();
    const auto& o = c.ea.strategy;
    for (const auto& [key, slot] : {std::pair{"p_target", o.p_target}, std::pair{"damping", o.damping},
                                    std::pair{"c_success", o.c_success}, std::pair{"c_path", o.c_path},
                                    std::pair{"c_cov", o.c_cov}, std::pair{"p_threshold", o.p_threshold}}) {
        if (slot) {
            strategy[key] = *slot;
        }
    }
    if (!strategy.empty()) {
        ea["strategy"] = strategy;
    }
    nlohmann::json j{
        {"name", f.name},
        {"dataset", c.dataset},
        {"study", to_string(f.kind)},
        {"attributes", c.spec.attributes},
        {"threshold", c.spec.threshold},
        {"runs", c.runs},
        {"seed", c.seed},
        {"train_fraction", c.train_fraction},
        {"feasibility_split", to_string(c.feasibility)},
        {"subsample", c.subsample},
        {"warm_start", c.warm_start},
        {"threads", c.threads},
        {"drop_sensitive", f.drop_sensitive},
        {"ea", ea},
        {"baseline",
         {{"learning_rate", c.baseline.learning_rate},
          {"warmup_epochs", c.baseline.warmup_epochs},
          {"max_epochs", c.baseline.max_epochs},
          {"tolerance", c.baseline.tolerance},
          {"l2", c.baseline.l2}}},
        {"plot", {{"bucket_width", f.bucket_width}, {"bucket_objective", f.bucket_objective}}},
    };
    if (f.kind == StudyKind::custom) {
        const auto spec = fairmo::to_json(c.spec);
        j["measures"] = spec.at("measures");
        j["collapse"] = c.spec.collapse;
    }
    return j;
}

} // namespace fairmo
