#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fairmo/dataset.hpp"
#include "fairmo/error.hpp"
#include "fairmo/hypervolume.hpp"
#include "fairmo/linear_model.hpp"
#include "fairmo/logistic.hpp"
#include "fairmo/metrics.hpp"
#include "fairmo/mo_cmaes.hpp"
#include "fairmo/rng.hpp"

namespace fairmo {

struct BiasSpec {
    std::vector<BiasMeasure> measures;
    std::vector<std::string> attributes;
    bool collapse = false;
    double threshold = 0.01;

    void validate() const
    {
        if (attributes.empty() || attributes.size() > 2) {
            throw SchemaError("bias spec: one or two attributes required");
        }
        if (collapse && attributes.size() != 2) {
            throw SchemaError("bias spec: collapsing requires two sensitive attributes");
        }
        if (!(threshold > 0.0 && threshold <= 1.0)) {
            throw SchemaError("bias spec: threshold must lie in (0, 1]");
        }
        for (std::size_t i = 0; i < measures.size(); ++i) {
            for (std::size_t j = i + 1; j < measures.size(); ++j) {
                if (measures[i] == measures[j]) {
                    throw SchemaError("bias spec: measure listed twice");
                }
            }
        }
    }

    std::size_t objective_count() const
    {
        return 1 + measures.size() * (collapse ? 1 : attributes.size());
    }

    // Objective indices carrying measure m (one per attribute unless collapsed).
    std::vector<std::size_t> components_of(BiasMeasure m) const
    {
        const auto it = std::find(measures.begin(), measures.end(), m);
        if (it == measures.end()) {
            return {};
        }
        const auto mi = static_cast<std::size_t>(it - measures.begin());
        if (collapse) {
            return {1 + mi};
        }
        std::vector<std::size_t> out;
        for (std::size_t a = 0; a < attributes.size(); ++a) {
            out.push_back(1 + mi * attributes.size() + a);
        }
        return out;
    }
};

// Objective vector of one linear model on one dataset split.
inline ObjectiveEvaluation evaluate_objectives(const Dataset& ds, const BiasSpec& spec, std::span<const double> params)
{
    const auto model = LinearModel::unpack(params);
    const auto yhat = predict(model, ds.X);
    return bias_vector(ds.y, yhat, ds.z_attrs, spec.measures, spec.attributes, spec.collapse);
}

inline Problem build_problem(std::shared_ptr<const Dataset> ds, const BiasSpec& spec)
{
    spec.validate();
    for (const auto& a : spec.attributes) {
        (void)ds->z(a);
    }
    Problem p;
    p.dimension = ds->features() + 1;
    p.objectives = spec.objective_count();
    p.evaluate = [ds = std::move(ds), spec](std::span<const double> x) {
        return evaluate_objectives(*ds, spec, x).values;
    };
    return p;
}

// The eight bias-objective combinations, numbered 1..8; bit 0 = DI, bit 1 = EO, bit 2 = DM (OMR).
inline constexpr std::array<unsigned, 8> combo_masks{0, 1, 2, 4, 1 | 2, 1 | 4, 2 | 4, 1 | 2 | 4};
inline constexpr int combo_count = 8;

inline unsigned combo_mask(int combo)
{
    if (combo < 1 || combo > combo_count) {
        throw ContractError("combo id must lie in 1..8");
    }
    return combo_masks[static_cast<std::size_t>(combo - 1)];
}

inline std::vector<BiasMeasure> combo_measures(int combo)
{
    const auto mask = combo_mask(combo);
    std::vector<BiasMeasure> out;
    if (mask & 1U) {
        out.push_back(BiasMeasure::DI);
    }
    if (mask & 2U) {
        out.push_back(BiasMeasure::EO);
    }
    if (mask & 4U) {
        out.push_back(BiasMeasure::DM_OMR);
    }
    return out;
}

inline std::string combo_label(int combo)
{
    const auto ms = combo_measures(combo);
    if (ms.empty()) {
        return "none";
    }
    std::string s;
    for (auto m : ms) {
        if (!s.empty()) {
            s += "+";
        }
        s += m == BiasMeasure::DM_OMR ? "DM" : std::string(to_string(m));
    }
    return s;
}

// Whether the objective vector carries every measure the combo constrains.
inline bool combo_applicable(int combo, const BiasSpec& spec)
{
    const auto ms = combo_measures(combo);
    return std::all_of(ms.begin(), ms.end(), [&](BiasMeasure m) { return !spec.components_of(m).empty(); });
}

inline bool is_feasible(const ObjectiveVector& f, int combo, const BiasSpec& spec)
{
    for (auto m : combo_measures(combo)) {
        const auto comps = spec.components_of(m);
        if (comps.empty()) {
            throw ContractError("combo " + std::to_string(combo) + " needs measure " + std::string(to_string(m)) +
                                " which the objective vector does not carry");
        }
        for (auto c : comps) {
            if (c >= f.size()) {
                throw DimensionError("objective vector shorter than the bias spec");
            }
            if (f[c] > spec.threshold) {
                return false;
            }
        }
    }
    return true;
}

// Highest accuracy (1 - error) among points whose combo-relevant bias
// components are all within the threshold. Feasibility is judged on
// `feasibility`, accuracy read from `reported` (same order, e.g. test vs train).
inline std::optional<double> select_best_feasible(std::span<const ObjectiveVector> feasibility,
                                                  std::span<const ObjectiveVector> reported, int combo,
                                                  const BiasSpec& spec)
{
    if (feasibility.size() != reported.size()) {
        throw DimensionError("select_best_feasible: point sets differ in size");
    }
    std::optional<double> best;
    for (std::size_t i = 0; i < feasibility.size(); ++i) {
        if (is_feasible(feasibility[i], combo, spec)) {
            const double acc = 1.0 - reported[i].front();
            if (!best || acc > *best) {
                best = acc;
            }
        }
    }
    return best;
}

inline std::optional<double> select_best_feasible(std::span<const ObjectiveVector> points, int combo,
                                                  const BiasSpec& spec)
{
    return select_best_feasible(points, points, combo, spec);
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
    std::size_t count = 0;
};

// Sample standard deviation (n - 1); zero for fewer than two values.
inline MeanStd mean_std(std::span<const double> v)
{
    MeanStd r;
    r.count = v.size();
    if (v.empty()) {
        return r;
    }
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    r.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) {
            ss += (x - r.mean) * (x - r.mean);
        }
        r.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return r;
}

struct ComboStats {
    int combo = 1;
    bool applicable = true;
    std::optional<MeanStd> accuracy; // empty = "n/a"
    std::size_t feasible_runs = 0;
    std::size_t runs = 0;
};

using RunStats = std::array<ComboStats, combo_count>;

// per_run[r][c-1] = best feasible accuracy of run r under combo c.
inline RunStats aggregate(std::span<const std::array<std::optional<double>, combo_count>> per_run,
                          const BiasSpec& spec)
{
    RunStats stats;
    for (int c = 1; c <= combo_count; ++c) {
        stats[static_cast<std::size_t>(c - 1)].applicable = combo_applicable(c, spec);
        std::vector<double> values;
        for (const auto& r : per_run) {
            if (const auto& v = r[static_cast<std::size_t>(c - 1)]) {
                values.push_back(*v);
            }
        }
        auto& s = stats[static_cast<std::size_t>(c - 1)];
        s.combo = c;
        s.runs = per_run.size();
        s.feasible_runs = values.size();
        if (!values.empty()) {
            s.accuracy = mean_std(values);
        }
    }
    return stats;
}

// Percentage-point change of the multi-attribute mean against the lower of the
// two single-attribute means; empty when any input is "n/a".
inline std::array<std::optional<double>, combo_count> marginal_impact(const RunStats& multi, const RunStats& single_a1,
                                                                      const RunStats& single_a2)
{
    std::array<std::optional<double>, combo_count> out;
    for (std::size_t c = 0; c < combo_count; ++c) {
        if (multi[c].accuracy && single_a1[c].accuracy && single_a2[c].accuracy) {
            const double floor = std::min(single_a1[c].accuracy->mean, single_a2[c].accuracy->mean);
            out[c] = 100.0 * (multi[c].accuracy->mean - floor);
        }
    }
    return out;
}

// argmax, ties resolved to the lowest index.
inline std::size_t best_hypervolume_run(std::span<const double> volumes)
{
    if (volumes.empty()) {
        throw ContractError("best_hypervolume_run: no runs");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < volumes.size(); ++i) {
        if (volumes[i] > volumes[best]) {
            best = i;
        }
    }
    return best;
}

struct Bucket {
    long index = 0; // bucket covers [index * width, (index + 1) * width)
    double lower = 0.0;
    double upper = 0.0;
    std::vector<std::size_t> members; // indices into the input points
};

// Half-open buckets over one coordinate. Values within 1e-9 of a boundary are
// placed in the upper bucket, so 0.3 with width 0.1 lands in [0.3, 0.4).
inline std::vector<Bucket> bucket_by_objective(std::span<const ObjectiveVector> points, std::size_t objective,
                                               double width)
{
    if (!(width > 0.0)) {
        throw ContractError("bucket width must be positive");
    }
    std::map<long, Bucket> buckets;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (objective >= points[i].size()) {
            throw DimensionError("bucket_by_objective: objective index out of range");
        }
        const auto k = static_cast<long>(std::floor(points[i][objective] / width + 1e-9));
        auto& b = buckets[k];
        b.index = k;
        b.lower = static_cast<double>(k) * width;
        b.upper = static_cast<double>(k + 1) * width;
        b.members.push_back(i);
    }
    std::vector<Bucket> out;
    out.reserve(buckets.size());
    for (auto& [k, b] : buckets) {
        out.push_back(std::move(b));
    }
    return out;
}

// Runs fn(0..n-1) on up to `threads` workers; rethrows the first failure after all finish.
inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn)
{
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        for (std::size_t t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

// ---------------------------------------------------------------------------
// Unconstrained logistic baselines.

struct SplitMetrics {
    double accuracy = 0.0;
    // attribute -> measure -> value
    std::map<std::string, std::map<BiasMeasure, BiasValue>> bias;
};

inline SplitMetrics split_metrics(const Dataset& ds, const LinearModel& m)
{
    const auto yhat = predict(m, ds.X);
    SplitMetrics out;
    bool first = true;
    for (const auto& a : ds.attribute_names) {
        const auto gc = confusion_by_group({ds.y, yhat, ds.z(a)});
        if (first) {
            out.accuracy = accuracy(gc);
            first = false;
        }
        for (auto meas : all_bias_measures) {
            out.bias[a][meas] = bias_measure(gc, meas);
        }
    }
    return out;
}

struct BaselineRun {
    std::size_t run = 0;
    std::uint64_t split_seed = 0;
    std::size_t epochs = 0;
    SplitMetrics train;
    SplitMetrics test;
};

struct BaselineOptions {
    std::size_t runs = 20;
    std::uint64_t seed = 1;
    double train_fraction = 0.8;
    TrainConfig train;
    std::size_t threads = 1;
};

inline std::vector<BaselineRun> run_baselines(const Dataset& ds, const BaselineOptions& opts)
{
    std::vector<BaselineRun> out(opts.runs);
    parallel_for(opts.runs, opts.threads, [&](std::size_t r) {
        const auto seed = derive_seed(opts.seed, r, seed_purpose::split);
        const auto parts = split(ds, opts.train_fraction, seed);
        const auto [train, test] = standardize(parts.train, parts.test);
        const auto fit = train_logistic_baseline(train, opts.train);
        out[r] = {r, seed, fit.epochs, split_metrics(train, fit.model), split_metrics(test, fit.model)};
    });
    return out;
}

// ---------------------------------------------------------------------------
// Bias-objective studies.

enum class FeasibilitySplit { train, test };

struct StudyConfig {
    std::string dataset;
    BiasSpec spec;
    EAConfig ea;
    TrainConfig baseline;
    std::size_t runs = 20;
    std::uint64_t seed = 1;
    double train_fraction = 0.8;
    FeasibilitySplit feasibility = FeasibilitySplit::train;
    std::size_t subsample = 1;
    bool warm_start = true; // half the population starts at the logistic baseline
    std::size_t threads = 1;
};

struct RunRecord {
    std::size_t run = 0;
    std::uint64_t split_seed = 0;
    std::uint64_t ea_seed = 0;
    double baseline_train_accuracy = 0.0;
    double final_hypervolume = 0.0;
    std::vector<ObjectiveVector> objectives_train; // archive members
    std::vector<ObjectiveVector> objectives_test;
    std::vector<std::vector<double>> params;
    std::vector<TraceRow> trace;
    std::array<std::optional<double>, combo_count> best{}; // per combo
};

inline std::array<std::optional<double>, combo_count> best_per_combo(const RunRecord& r, const BiasSpec& spec,
                                                                     FeasibilitySplit feasibility)
{
    std::array<std::optional<double>, combo_count> out;
    const auto& gate = feasibility == FeasibilitySplit::train ? r.objectives_train : r.objectives_test;
    for (int c = 1; c <= combo_count; ++c) {
        if (combo_applicable(c, spec)) {
            out[static_cast<std::size_t>(c - 1)] = select_best_feasible(gate, r.objectives_train, c, spec);
        }
    }
    return out;
}

inline Dataset prepare_study_dataset(const Dataset& ds, const StudyConfig& cfg)
{
    if (cfg.subsample > 1) {
        return subsample(ds, cfg.subsample, derive_seed(cfg.seed, 0, seed_purpose::subsample));
    }
    return ds;
}

// One seeded run: split, baseline warm start, EA on the training split, then
// test-split objectives for every archive member.
inline RunRecord execute_run(const Dataset& ds, const StudyConfig& cfg, std::size_t run)
{
    RunRecord rec;
    rec.run = run;
    rec.split_seed = derive_seed(cfg.seed, run, seed_purpose::split);
    rec.ea_seed = derive_seed(cfg.seed, run, seed_purpose::optimizer);
    const auto parts = split(ds, cfg.train_fraction, rec.split_seed);
    auto [train, test] = standardize(parts.train, parts.test);
    auto shared_train = std::make_shared<const Dataset>(std::move(train));

    const auto fit = train_logistic_baseline(*shared_train, cfg.baseline);
    rec.baseline_train_accuracy = split_metrics(*shared_train, fit.model).accuracy;

    auto ea = cfg.ea;
    ea.seed = rec.ea_seed;
    if (cfg.warm_start) {
        ea.anchors = {fit.model.packed(), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(shared_train->features() + 1))};
    }
    const auto problem = build_problem(shared_train, cfg.spec);
    auto result = fairmo::run(problem, ea);

    rec.final_hypervolume = result.archive.hypervolume();
    rec.trace = std::move(result.trace);
    for (const auto& m : result.archive.members()) {
        rec.objectives_train.push_back(m.f);
        rec.params.emplace_back(m.x.data(), m.x.data() + m.x.size());
        rec.objectives_test.push_back(evaluate_objectives(test, cfg.spec, rec.params.back()).values);
    }
    rec.best = best_per_combo(rec, cfg.spec, cfg.feasibility);
    return rec;
}

// ---------------------------------------------------------------------------
// Serialisation.

inline nlohmann::json optional_json(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::optional<double> optional_from_json(const nlohmann::json& j)
{
    return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

inline nlohmann::json to_json(const BiasSpec& s)
{
    std::vector<std::string> ms;
    for (auto m : s.measures) {
        ms.emplace_back(to_string(m));
    }
    return {{"measures", ms}, {"attributes", s.attributes}, {"collapse", s.collapse}, {"threshold", s.threshold}};
}

inline BiasSpec bias_spec_from_json(const nlohmann::json& j)
{
    BiasSpec s;
    for (const auto& m : j.at("measures")) {
        s.measures.push_back(parse_bias_measure(m.get<std::string>()));
    }
    s.attributes = j.at("attributes").get<std::vector<std::string>>();
    s.collapse = j.value("collapse", false);
    s.threshold = j.value("threshold", 0.01);
    s.validate();
    return s;
}

inline nlohmann::json to_json(const RunRecord& r)
{
    nlohmann::json best = nlohmann::json::object();
    for (int c = 1; c <= combo_count; ++c) {
        best[std::to_string(c)] = optional_json(r.best[static_cast<std::size_t>(c - 1)]);
    }
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : r.trace) {
        trace.push_back({t.generation, t.archive_size, t.hypervolume, t.best_error});
    }
    return {
        {"run", r.run},
        {"split_seed", r.split_seed},
        {"ea_seed", r.ea_seed},
        {"baseline_train_accuracy", r.baseline_train_accuracy},
        {"final_hypervolume", r.final_hypervolume},
        {"objectives_train", r.objectives_train},
        {"objectives_test", r.objectives_test},
        {"params", r.params},
        {"trace", trace},
        {"best", best},
    };
}

inline RunRecord run_record_from_json(const nlohmann::json& j)
{
    RunRecord r;
    r.run = j.at("run").get<std::size_t>();
    r.split_seed = j.at("split_seed").get<std::uint64_t>();
    r.ea_seed = j.at("ea_seed").get<std::uint64_t>();
    r.baseline_train_accuracy = j.at("baseline_train_accuracy").get<double>();
    r.final_hypervolume = j.at("final_hypervolume").get<double>();
    r.objectives_train = j.at("objectives_train").get<std::vector<ObjectiveVector>>();
    r.objectives_test = j.at("objectives_test").get<std::vector<ObjectiveVector>>();
    r.params = j.at("params").get<std::vector<std::vector<double>>>();
    for (const auto& t : j.at("trace")) {
        r.trace.push_back({t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>(), t.at(2).get<double>(),
                           t.at(3).get<double>()});
    }
    for (int c = 1; c <= combo_count; ++c) {
        r.best[static_cast<std::size_t>(c - 1)] = optional_from_json(j.at("best").at(std::to_string(c)));
    }
    return r;
}

// Writes via a temporary file and rename so readers never see partial output.
inline void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp.string());
        }
        out << content;
        if (!out) {
            throw Error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

inline std::filesystem::path run_record_path(const std::filesystem::path& dir, std::size_t run)
{
    char name[32];
    std::snprintf(name, sizeof name, "run_%03zu.json", run);
    return dir / "runs" / name;
}

inline std::optional<RunRecord> load_run_record(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    try {
        nlohmann::json j;
        in >> j;
        return run_record_from_json(j);
    } catch (const nlohmann::json::exception&) {
        return std::nullopt; // unreadable records are recomputed
    }
}

struct StudyResult {
    std::vector<RunRecord> runs;
    RunStats stats;
    std::size_t best_run = 0;
    std::size_t resumed = 0;
};

// Called once per run as it finishes (or is reloaded); may be invoked from worker threads.
using RunCallback = std::function<void(const RunRecord&, bool resumed)>;

// Runs (or resumes) a study. With a non-empty `out_dir` each finished run is
// persisted immediately and existing records are reused instead of recomputed.
inline StudyResult run_study(const Dataset& full, const StudyConfig& cfg, const std::filesystem::path& out_dir = {},
                             const RunCallback& on_run = {})
{
    cfg.spec.validate();
    for (const auto& a : cfg.spec.attributes) {
        if (!full.has_attribute(a)) {
            throw SchemaError("dataset '" + full.name + "' has no sensitive attribute '" + a + "'");
        }
    }
    const auto ds = prepare_study_dataset(full, cfg);
    StudyResult result;
    result.runs.resize(cfg.runs);
    std::vector<bool> done(cfg.runs, false);
    if (!out_dir.empty()) {
        for (std::size_t r = 0; r < cfg.runs; ++r) {
            if (auto rec = load_run_record(run_record_path(out_dir, r)); rec && rec->run == r) {
                result.runs[r] = std::move(*rec);
                done[r] = true;
                ++result.resumed;
                if (on_run) {
                    on_run(result.runs[r], true);
                }
            }
        }
    }
    parallel_for(cfg.runs, cfg.threads, [&](std::size_t r) {
        if (done[r]) {
            return;
        }
        result.runs[r] = execute_run(ds, cfg, r);
        if (!out_dir.empty()) {
            write_atomic(run_record_path(out_dir, r), to_json(result.runs[r]).dump());
        }
        if (on_run) {
            on_run(result.runs[r], false);
        }
    });

    std::vector<std::array<std::optional<double>, combo_count>> per_run;
    std::vector<double> volumes;
    for (auto& r : result.runs) {
        r.best = best_per_combo(r, cfg.spec, cfg.feasibility);
        per_run.push_back(r.best);
        volumes.push_back(r.final_hypervolume);
    }
    result.stats = aggregate(per_run, cfg.spec);
    result.best_run = best_hypervolume_run(volumes);
    return result;
}

inline StudyConfig single_attribute_config(const std::string& attr, StudyConfig base)
{
    base.spec.measures = {BiasMeasure::DI, BiasMeasure::EO, BiasMeasure::DM_OMR};
    base.spec.attributes = {attr};
    base.spec.collapse = false;
    return base;
}

inline StudyConfig multi_attribute_config(const std::string& a1, const std::string& a2, StudyConfig base)
{
    base.spec.measures = {BiasMeasure::DI, BiasMeasure::EO, BiasMeasure::DM_OMR};
    base.spec.attributes = {a1, a2};
    base.spec.collapse = true;
    return base;
}

inline StudyConfig dual_dm_config(const std::string& a1, const std::string& a2, StudyConfig base)
{
    base.spec.measures = {BiasMeasure::DM_OMR};
    base.spec.attributes = {a1, a2};
    base.spec.collapse = false;
    return base;
}

inline StudyResult run_single_attribute_study(const Dataset& ds, const std::string& attr, const StudyConfig& base,
                                              const std::filesystem::path& out_dir = {})
{
    return run_study(ds, single_attribute_config(attr, base), out_dir);
}

inline StudyResult run_multi_attribute_study(const Dataset& ds, const std::string& a1, const std::string& a2,
                                             const StudyConfig& base, const std::filesystem::path& out_dir = {})
{
    return run_study(ds, multi_attribute_config(a1, a2, base), out_dir);
}

// Error rate plus DM (OMR) over each attribute, uncollapsed. Returns the study;
// the archive for trade-off plotting is runs[best_run].
inline StudyResult dual_dm_study(const Dataset& ds, const std::string& a1, const std::string& a2,
                                 const StudyConfig& base, const std::filesystem::path& out_dir = {})
{
    return run_study(ds, dual_dm_config(a1, a2, base), out_dir);
}

} // namespace fairmo
