// fairmo command-line harness: ingest, baseline, optimize, study, report, plot-data.
//
// Exit codes: 0 ok, 2 config/schema, 3 missing data, 4 run failure, 5 empty input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairmo/fairmo.hpp"

#ifndef FAIRMO_DEFAULT_DATA_DIR
#define FAIRMO_DEFAULT_DATA_DIR "data"
#endif
#ifndef FAIRMO_DEFAULT_CONFIG_DIR
#define FAIRMO_DEFAULT_CONFIG_DIR "configs"
#endif

namespace fs = std::filesystem;
using namespace fairmo;

namespace {

enum ExitCode { ok = 0, config_error = 2, missing_data = 3, run_failure = 4, empty_input = 5 };

struct EmptyInput : Error {
    using Error::Error;
};

// A failure inside a run, after configuration was accepted.
struct RunFailure : Error {
    using Error::Error;
};

struct Shared {
    std::string config_dir;
    std::string data_dir;
    std::string out;
    int verbosity = 0;
};

std::string env_or(const char* name, const char* fallback)
{
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

void log(const Shared& s, int level, const std::string& msg)
{
    if (s.verbosity >= level) {
        std::cerr << msg << "\n";
    }
}

fs::path schema_path(const Shared& s, const std::string& dataset)
{
    if (dataset.ends_with(".json")) {
        return dataset;
    }
    return fs::path(s.config_dir) / "datasets" / (dataset + ".json");
}

DatasetSchema resolve_schema(const Shared& s, const std::string& dataset)
{
    const auto path = schema_path(s, dataset);
    if (!fs::exists(path)) {
        throw SchemaError("unknown dataset '" + dataset + "' (no schema at " + path.string() + ")");
    }
    return load_schema(path.string());
}

Dataset load_data(const Shared& s, const DatasetSchema& schema, bool drop_sensitive)
{
    const auto path = fs::path(s.data_dir) / schema.file;
    if (!fs::exists(path)) {
        throw MissingDataError("data file " + path.string() + " not found.\n"
                               "Raw datasets are not bundled. Fetch and prepare them with\n"
                               "  python3 scripts/fetch_data.py --out " + s.data_dir + "\n"
                               "or point --data-dir (or FAIRMO_DATA_DIR) at a directory holding " + schema.file + ".");
    }
    LoadOptions opts;
    opts.drop_sensitive = drop_sensitive;
    auto ds = load_dataset(path.string(), schema, opts);
    log(s, 1, "loaded " + schema.name + ": " + std::to_string(ds.rows()) + " rows, " + std::to_string(ds.features()) +
                  " features, " + std::to_string(ds.dropped_rows) + " rows dropped for missing values");
    return ds;
}

fs::path out_dir(const Shared& s, const std::string& fallback)
{
    return s.out.empty() ? fs::path("results") / fallback : fs::path(s.out);
}

void write_text(const fs::path& path, const std::string& text)
{
    write_atomic(path, text);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string dataset;
    bool drop_sensitive = false;
};

int cmd_ingest(const Shared& s, const IngestArgs& a)
{
    const auto schema = resolve_schema(s, a.dataset);
    const auto ds = load_data(s, schema, a.drop_sensitive);
    const auto dir = out_dir(s, schema.name);

    for (const auto& attr : ds.attribute_names) {
        const auto table = summarize(ds, attr);
        const auto text = report::group_table_text(schema.name, table);
        std::cout << text << "\n";
        write_text(dir / ("summary_" + attr + ".txt"), text);
        write_text(dir / ("summary_" + attr + ".csv"), report::group_table_csv(table));
    }

    // Encoded dataset, standardized over all rows; splits re-standardize on their training part.
    const Eigen::MatrixXd X = Standardizer::fit(ds.X).apply(ds.X);
    std::ostringstream csv;
    for (const auto& f : ds.feature_names) {
        csv << csv::escape(f) << ",";
    }
    csv << "y";
    for (const auto& attr : ds.attribute_names) {
        csv << ",z_" << attr;
    }
    csv << "\n";
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index k = 0; k < X.cols(); ++k) {
            csv << report::fixed(X(i, k), 9) << ",";
        }
        csv << ds.y[static_cast<std::size_t>(i)];
        for (const auto& attr : ds.attribute_names) {
            csv << "," << ds.z(attr)[static_cast<std::size_t>(i)];
        }
        csv << "\n";
    }
    write_text(dir / "dataset.csv", csv.str());
    const nlohmann::json info{{"dataset", schema.name},          {"rows", ds.rows()},
                              {"features", ds.features()},       {"dropped_rows", ds.dropped_rows},
                              {"attributes", ds.attribute_names}, {"drop_sensitive", a.drop_sensitive}};
    write_text(dir / "ingest.json", info.dump(2) + "\n");
    std::cout << schema.name << ": " << ds.rows() << " rows, " << ds.features() << " encoded features, "
              << ds.dropped_rows << " rows dropped; outputs in " << dir.string() << "\n";
    return ok;
}

// ---------------------------------------------------------------------------

struct BaselineArgs {
    std::string dataset;
    std::size_t runs = 20;
    std::uint64_t seed = 1;
    double split = 0.8;
    double l2 = 0.0;
    std::size_t threads = 1;
    bool drop_sensitive = false;
    std::string save_model;
};

int cmd_baseline(const Shared& s, const BaselineArgs& a)
{
    const auto schema = resolve_schema(s, a.dataset);
    const auto ds = load_data(s, schema, a.drop_sensitive);
    BaselineOptions opts;
    opts.runs = a.runs;
    opts.seed = a.seed;
    opts.train_fraction = a.split;
    opts.train.l2 = a.l2;
    opts.threads = a.threads;
    opts.train.validate();
    if (a.runs < 1) {
        throw SchemaError("--runs must be >= 1");
    }

    std::vector<BaselineRun> runs;
    try {
        runs = run_baselines(ds, opts);
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw RunFailure(e.what());
    }
    const auto train = report::summarize_baselines(runs, false);
    const auto test = report::summarize_baselines(runs, true);
    const auto dir = out_dir(s, schema.name);
    write_text(dir / "baseline_runs.csv", report::baseline_csv(schema.name, runs));
    write_text(dir / "baseline_aggregate.csv", report::baseline_aggregate_csv(schema.name, train, test));
    const auto table = report::baseline_table_text(schema.name, train, runs.size());
    write_text(dir / "baseline_table.txt", table);
    std::cout << table;
    std::cout << "test accuracy " << report::mean_std_cell(test.accuracy) << "\n";

    if (!a.save_model.empty()) {
        // the model of run 0, refit so the record carries its own split seed
        const auto seed = derive_seed(a.seed, 0, seed_purpose::split);
        const auto parts = split(ds, a.split, seed);
        const auto [tr, te] = standardize(parts.train, parts.test);
        const auto fit = train_logistic_baseline(tr, opts.train);
        const nlohmann::json meta{{"dataset", schema.name}, {"split_seed", seed},        {"epochs", fit.epochs},
                                  {"converged", fit.converged}, {"l2", a.l2},            {"train_fraction", a.split},
                                  {"note", "weights apply to features standardized on the training split"}};
        write_text(a.save_model, to_json(fit.model, tr.feature_names, meta).dump(2) + "\n");
        std::cout << "model written to " << a.save_model << "\n";
    }
    std::cout << "outputs in " << dir.string() << "\n";
    return ok;
}

// ---------------------------------------------------------------------------

struct OptimizeArgs {
    std::string dataset;
    std::string attributes;
    std::string measures = "DI,EO,DM";
    bool collapse = false;
    std::size_t generations = 500;
    std::size_t popsize = 20;
    std::uint64_t seed = 1;
    double split = 0.8;
    double threshold = 0.01;
    bool drop_sensitive = false;
    bool export_models = false;
};

int cmd_optimize(const Shared& s, const OptimizeArgs& a)
{
    const auto schema = resolve_schema(s, a.dataset);
    StudyFile f;
    f.kind = StudyKind::custom;
    f.name = schema.name + "-optimize";
    f.cfg.dataset = schema.name;
    f.cfg.spec.attributes = split_list(a.attributes);
    for (const auto& m : split_list(a.measures)) {
        f.cfg.spec.measures.push_back(parse_bias_measure(m));
    }
    f.cfg.spec.collapse = a.collapse;
    f.cfg.spec.threshold = a.threshold;
    f.cfg.runs = 1;
    f.cfg.seed = a.seed;
    f.cfg.train_fraction = a.split;
    f.cfg.ea.population = a.popsize;
    f.cfg.ea.generations = a.generations;
    f.drop_sensitive = a.drop_sensitive;
    check_study_against_schema(f, schema);
    const auto ds = load_data(s, schema, a.drop_sensitive);

    RunRecord rec;
    try {
        rec = execute_run(ds, f.cfg, 0);
    } catch (const Error& e) {
        throw RunFailure(e.what());
    }
    const auto dir = out_dir(s, f.name);
    const auto labels = objective_labels(f.cfg.spec);
    nlohmann::json archive{{"study", to_json(f)}, {"objective_labels", labels}, {"record", to_json(rec)}};
    write_text(dir / "archive.json", archive.dump() + "\n");
    write_text(dir / "trace.csv", report::trace_csv(rec.trace));
    if (a.export_models) {
        for (std::size_t i = 0; i < rec.params.size(); ++i) {
            char name[48];
            std::snprintf(name, sizeof name, "model_%04zu.json", i);
            const nlohmann::json meta{{"dataset", schema.name}, {"objectives_train", rec.objectives_train[i]},
                                      {"objectives_test", rec.objectives_test[i]}, {"split_seed", rec.split_seed}};
            const auto model = LinearModel::unpack(rec.params[i]);
            write_text(dir / "models" / name, to_json(model, ds.feature_names, meta).dump(2) + "\n");
        }
    }
    std::cout << "archive: " << rec.params.size() << " models, hypervolume " << report::fixed(rec.final_hypervolume, 6)
              << ", baseline train accuracy " << report::fixed(rec.baseline_train_accuracy) << "\n";
    for (int c = 1; c <= combo_count; ++c) {
        if (!combo_applicable(c, f.cfg.spec)) {
            continue;
        }
        const auto& best = rec.best[static_cast<std::size_t>(c - 1)];
        std::cout << "  combo " << c << " (" << combo_label(c) << "): "
                  << (best ? report::fixed(*best) : std::string("n/a")) << "\n";
    }
    std::cout << "outputs in " << dir.string() << "\n";
    return ok;
}

// ---------------------------------------------------------------------------

struct StudyArgs {
    std::string config;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> generations;
    std::optional<std::size_t> popsize;
    std::optional<double> threshold;
    std::optional<double> split;
    std::optional<std::string> feasibility;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    bool drop_sensitive = false;
    bool full_scale = false;
};

// Keys that may differ between a persisted study and a resumed one.
nlohmann::json comparable(nlohmann::json j)
{
    j.erase("runs");
    j.erase("threads");
    j.erase("plot");
    return j;
}

int cmd_study(const Shared& s, const StudyArgs& a)
{
    auto f = load_study_file(a.config, a.full_scale);
    if (a.runs) {
        f.cfg.runs = *a.runs;
    }
    if (a.generations) {
        f.cfg.ea.generations = *a.generations;
    }
    if (a.popsize) {
        f.cfg.ea.population = *a.popsize;
    }
    if (a.threshold) {
        f.cfg.spec.threshold = *a.threshold;
    }
    if (a.split) {
        f.cfg.train_fraction = *a.split;
    }
    if (a.feasibility) {
        f.cfg.feasibility = parse_feasibility_split(*a.feasibility);
    }
    if (a.seed) {
        f.cfg.seed = *a.seed;
    }
    if (a.threads) {
        f.cfg.threads = *a.threads;
    }
    f.drop_sensitive = f.drop_sensitive || a.drop_sensitive;

    const auto schema = resolve_schema(s, f.cfg.dataset);
    check_study_against_schema(f, schema);
    const auto dir = out_dir(s, f.name);

    if (std::ifstream existing(study_config_path(dir)); existing) {
        nlohmann::json old;
        try {
            existing >> old;
        } catch (const nlohmann::json::exception&) {
            throw SchemaError(study_config_path(dir).string() + " is unreadable; remove it or choose another --out");
        }
        if (comparable(old) != comparable(to_json(f))) {
            throw SchemaError(dir.string() + " holds results of a different study configuration; choose another --out");
        }
    }
    const auto ds = load_data(s, schema, f.drop_sensitive);
    write_text(study_config_path(dir), to_json(f).dump(2) + "\n");

    std::mutex progress;
    const auto on_run = [&](const RunRecord& r, bool resumed) {
        std::lock_guard lock(progress);
        log(s, 1, (resumed ? "reused run " : "finished run ") + std::to_string(r.run) + ": archive " +
                      std::to_string(r.params.size()) + ", hypervolume " + report::fixed(r.final_hypervolume, 6));
        if (!resumed) {
            write_text(dir / "traces" / ("run_" + std::to_string(r.run) + ".csv"), report::trace_csv(r.trace));
        }
    };
    StudyResult result;
    try {
        result = run_study(ds, f.cfg, dir, on_run);
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw RunFailure(std::string(e.what()) + " (completed runs are kept in " + (dir / "runs").string() + ")");
    }

    write_text(dir / "results.jsonl", report::per_run_jsonl(f.cfg, result.runs));
    write_text(dir / "combo_table.csv", report::combo_table_csv(result.stats));
    const auto title = f.name + ": " + std::to_string(f.cfg.runs) + " runs, mu=" + std::to_string(f.cfg.ea.population) +
                       ", G=" + std::to_string(f.cfg.ea.generations) + ", threshold " +
                       report::fixed(f.cfg.spec.threshold, 3) + ", feasibility on " + to_string(f.cfg.feasibility) +
                       " split";
    const auto table = report::combo_table_text(title, result.stats);
    write_text(dir / "combo_table.txt", table);
    std::cout << table;
    std::cout << "best-hypervolume run: " << result.best_run << "; " << result.resumed << " runs reused; outputs in "
              << dir.string() << "\n";
    return ok;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
    std::string results;
    std::vector<std::string> singles;
    std::optional<std::string> feasibility;
    std::string model;
    std::string dataset;
    bool drop_sensitive = false;
};

int report_model(const Shared& s, const ReportArgs& a)
{
    if (a.dataset.empty()) {
        throw SchemaError("--model needs --dataset");
    }
    std::ifstream in(a.model);
    if (!in) {
        throw MissingDataError("cannot open model " + a.model);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(a.model + ": " + e.what());
    }
    const auto model = model_from_json(j);
    const auto schema = resolve_schema(s, a.dataset);
    auto ds = load_data(s, schema, a.drop_sensitive);
    if (ds.features() != static_cast<std::size_t>(model.w.size())) {
        throw SchemaError("model has " + std::to_string(model.w.size()) + " weights but the dataset encodes " +
                          std::to_string(ds.features()) + " features");
    }
    // Saved weights refer to standardized inputs; rebuild the model's training split to recover the scaling.
    const auto meta = j.value("metadata", nlohmann::json::object());
    const auto seed = meta.value("split_seed", std::uint64_t{0});
    const auto frac = meta.value("train_fraction", 0.8);
    const auto parts = split(ds, frac, seed);
    const auto [train, test] = standardize(parts.train, parts.test);
    for (const auto& [name, part] : {std::pair<std::string, const Dataset*>{"train", &train}, {"test", &test}}) {
        const auto m = split_metrics(*part, model);
        std::cout << name << ": accuracy " << report::fixed(m.accuracy) << "\n";
        for (const auto& [attr, values] : m.bias) {
            std::cout << "  " << attr << ":";
            for (const auto& [id, v] : values) {
                std::cout << " " << to_string(id) << "=" << report::fixed(v.value) << (v.undefined ? "*" : "");
            }
            std::cout << "\n";
        }
    }
    return ok;
}

int cmd_report(const Shared& s, const ReportArgs& a)
{
    if (!a.model.empty()) {
        return report_model(s, a);
    }
    if (a.results.empty()) {
        throw SchemaError("report needs --results DIR or --model FILE");
    }
    auto load = [&](const std::string& dir) {
        auto r = load_results(dir);
        if (a.feasibility) {
            r.study.cfg.feasibility = parse_feasibility_split(*a.feasibility);
            for (auto& run : r.runs) {
                run.best = best_per_combo(run, r.study.cfg.spec, r.study.cfg.feasibility);
            }
        }
        if (r.runs.empty()) {
            throw EmptyInput(dir + " holds no completed runs");
        }
        return r;
    };
    const auto main = load(a.results);
    const auto stats = aggregate_runs(main.runs, main.study.cfg.spec);
    std::cout << report::combo_table_text(main.study.name + ": " + std::to_string(main.runs.size()) + "/" +
                                              std::to_string(main.expected_runs) + " runs, feasibility on " +
                                              to_string(main.study.cfg.feasibility) + " split",
                                          stats);
    if (!a.singles.empty()) {
        if (a.singles.size() != 2) {
            throw SchemaError("--singles takes exactly two single-attribute result directories");
        }
        const auto s1 = load(a.singles[0]);
        const auto s2 = load(a.singles[1]);
        const auto deltas = marginal_impact(stats, aggregate_runs(s1.runs, s1.study.cfg.spec),
                                            aggregate_runs(s2.runs, s2.study.cfg.spec));
        std::cout << "\n" << report::marginal_impact_text(deltas);
    }
    return ok;
}

// ---------------------------------------------------------------------------

struct PlotArgs {
    std::string results;
    std::optional<double> bucket_width;
    std::optional<std::size_t> bucket_objective;
};

int cmd_plot_data(const Shared& s, const PlotArgs& a)
{
    if (!fs::is_directory(a.results)) {
        throw EmptyInput("results directory " + a.results + " does not exist");
    }
    StudyResults results;
    try {
        results = load_results(a.results);
    } catch (const MissingDataError& e) {
        throw EmptyInput(e.what());
    }
    if (results.runs.empty()) {
        throw EmptyInput(a.results + " holds no completed runs");
    }
    PlotDataOptions opts;
    opts.bucket_width = a.bucket_width.value_or(results.study.bucket_width);
    opts.bucket_objective = a.bucket_objective.value_or(results.study.bucket_objective);
    if (!(opts.bucket_width > 0.0)) {
        throw SchemaError("--bucket-width must be positive");
    }
    const auto dir = s.out.empty() ? fs::path(a.results) / "plots" : fs::path(s.out);
    const auto manifest = write_plot_data(results, dir, opts);
    std::cout << "wrote " << manifest.at("figures").size() << " figure entries to " << (dir / "manifest.json").string()
              << "\n";
    return ok;
}

void add_shared(CLI::App* cmd, Shared& s)
{
    cmd->add_option("--out", s.out, "Output directory");
    cmd->add_option("--config-dir", s.config_dir, "Directory holding datasets/*.json schemas")->capture_default_str();
    cmd->add_option("--data-dir", s.data_dir, "Directory holding the prepared dataset CSVs")->capture_default_str();
    cmd->add_flag("-v,--verbose", s.verbosity, "Progress messages on stderr (repeat for more)");
}

} // namespace

int main(int argc, char** argv)
{
    Shared shared;
    shared.config_dir = env_or("FAIRMO_CONFIG_DIR", FAIRMO_DEFAULT_CONFIG_DIR);
    shared.data_dir = env_or("FAIRMO_DATA_DIR", FAIRMO_DEFAULT_DATA_DIR);

    CLI::App app{"Linear credit-scoring models under multiple bias objectives (MO-CMA-ES)"};
    app.require_subcommand(1, 1);

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Load a dataset, write outcome-by-group tables and the encoded data");
    c_ingest->add_option("dataset", ingest.dataset, "Dataset name (configs/datasets/<name>.json) or schema path")
        ->required();
    c_ingest->add_flag("--drop-sensitive", ingest.drop_sensitive, "Exclude sensitive columns from the features");
    add_shared(c_ingest, shared);

    BaselineArgs base;
    auto* c_base = app.add_subcommand("baseline", "Unconstrained logistic regression over seeded splits");
    c_base->add_option("dataset", base.dataset, "Dataset name or schema path")->required();
    c_base->add_option("--runs", base.runs, "Number of split seeds")->capture_default_str();
    c_base->add_option("--seed", base.seed, "Root seed")->capture_default_str();
    c_base->add_option("--split", base.split, "Training fraction")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    c_base->add_option("--l2", base.l2, "L2 penalty")->capture_default_str();
    c_base->add_option("--threads", base.threads, "Concurrent runs")->capture_default_str();
    c_base->add_flag("--drop-sensitive", base.drop_sensitive, "Exclude sensitive columns from the features");
    c_base->add_option("--save-model", base.save_model, "Write the run-0 model to this JSON file");
    add_shared(c_base, shared);

    OptimizeArgs opt;
    auto* c_opt = app.add_subcommand("optimize", "One MO-CMA-ES run on a dataset split");
    c_opt->add_option("dataset", opt.dataset, "Dataset name or schema path")->required();
    c_opt->add_option("--attributes", opt.attributes, "Sensitive attributes, comma separated")->required();
    c_opt->add_option("--measures", opt.measures, "Bias measures, comma separated")->capture_default_str();
    c_opt->add_flag("--collapse", opt.collapse, "One objective per measure: max over the two attributes");
    c_opt->add_option("--generations", opt.generations)->capture_default_str();
    c_opt->add_option("--popsize", opt.popsize)->capture_default_str();
    c_opt->add_option("--seed", opt.seed)->capture_default_str();
    c_opt->add_option("--split", opt.split)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    c_opt->add_option("--threshold", opt.threshold, "Bias threshold for the per-combo summary")->capture_default_str();
    c_opt->add_flag("--drop-sensitive", opt.drop_sensitive);
    c_opt->add_flag("--export-models", opt.export_models, "Write every archive member as a model JSON");
    add_shared(c_opt, shared);

    StudyArgs study;
    auto* c_study = app.add_subcommand("study", "Run or resume a configured multi-run study");
    c_study->add_option("--config", study.config, "Study config (JSON)")->required();
    c_study->add_option("--runs", study.runs);
    c_study->add_option("--generations", study.generations);
    c_study->add_option("--popsize", study.popsize);
    c_study->add_option("--threshold", study.threshold);
    c_study->add_option("--split", study.split);
    c_study->add_option("--feasibility-split", study.feasibility)->check(CLI::IsMember({"train", "test"}));
    c_study->add_option("--seed", study.seed);
    c_study->add_option("--threads", study.threads);
    c_study->add_flag("--drop-sensitive", study.drop_sensitive);
    c_study->add_flag("--full-scale", study.full_scale, "Apply the config's paper-scale overrides");
    add_shared(c_study, shared);

    ReportArgs rep;
    auto* c_rep = app.add_subcommand("report", "Recompute tables from persisted run records, or evaluate a saved model");
    c_rep->add_option("--results", rep.results, "Study output directory");
    c_rep->add_option("--singles", rep.singles, "Two single-attribute study directories (marginal impact)")
        ->expected(2);
    c_rep->add_option("--feasibility-split", rep.feasibility)->check(CLI::IsMember({"train", "test"}));
    c_rep->add_option("--model", rep.model, "Saved model JSON to evaluate");
    c_rep->add_option("--dataset", rep.dataset, "Dataset for --model");
    c_rep->add_flag("--drop-sensitive", rep.drop_sensitive);
    add_shared(c_rep, shared);

    PlotArgs plot;
    auto* c_plot = app.add_subcommand("plot-data", "Emit bucketed point files and a figure manifest");
    c_plot->add_option("--results", plot.results, "Study output directory")->required();
    c_plot->add_option("--bucket-width", plot.bucket_width);
    c_plot->add_option("--bucket-objective", plot.bucket_objective, "Objective index to bucket on (0 = accuracy)");
    add_shared(c_plot, shared);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        if (*c_ingest) {
            return cmd_ingest(shared, ingest);
        }
        if (*c_base) {
            return cmd_baseline(shared, base);
        }
        if (*c_opt) {
            return cmd_optimize(shared, opt);
        }
        if (*c_study) {
            return cmd_study(shared, study);
        }
        if (*c_rep) {
            return cmd_report(shared, rep);
        }
        if (*c_plot) {
            return cmd_plot_data(shared, plot);
        }
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    } catch (const MissingDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return missing_data;
    } catch (const EmptyInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return empty_input;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return run_failure;
    }
    return config_error;
}
