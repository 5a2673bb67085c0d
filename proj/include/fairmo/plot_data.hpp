#pragma once

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairmo/config.hpp"
#include "fairmo/experiments.hpp"
#include "fairmo/report.hpp"

namespace fairmo {

// A finished (or partially finished) study read back from its output directory.
struct StudyResults {
    StudyFile study;
    std::vector<RunRecord> runs; // only the runs with a readable record, ascending
    std::size_t expected_runs = 0;
};

inline std::filesystem::path study_config_path(const std::filesystem::path& dir)
{
    return dir / "study.json";
}

// Throws MissingDataError when the directory holds no study.
inline StudyResults load_results(const std::filesystem::path& dir)
{
    std::ifstream in(study_config_path(dir));
    if (!in) {
        throw MissingDataError("no study.json in " + dir.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(study_config_path(dir).string() + ": " + e.what());
    }
    StudyResults out;
    out.study = study_from_json(std::move(j));
    out.expected_runs = out.study.cfg.runs;
    for (std::size_t r = 0; r < out.expected_runs; ++r) {
        if (auto rec = load_run_record(run_record_path(dir, r)); rec && rec->run == r) {
            rec->best = best_per_combo(*rec, out.study.cfg.spec, out.study.cfg.feasibility);
            out.runs.push_back(std::move(*rec));
        }
    }
    return out;
}

inline RunStats aggregate_runs(std::span<const RunRecord> runs, const BiasSpec& spec)
{
    std::vector<std::array<std::optional<double>, combo_count>> per_run;
    for (const auto& r : runs) {
        per_run.push_back(r.best);
    }
    return aggregate(per_run, spec);
}

inline std::size_t best_hypervolume_run(std::span<const RunRecord> runs)
{
    std::vector<double> volumes;
    for (const auto& r : runs) {
        volumes.push_back(r.final_hypervolume);
    }
    return best_hypervolume_run(std::span<const double>(volumes));
}

// Axis label per objective component; component 0 is shown as accuracy.
inline std::vector<std::string> objective_labels(const BiasSpec& spec)
{
    std::vector<std::string> out{"accuracy"};
    for (auto m : spec.measures) {
        const std::string name = m == BiasMeasure::DM_OMR ? "DM" : std::string(to_string(m));
        if (spec.collapse) {
            std::string attrs;
            for (const auto& a : spec.attributes) {
                attrs += (attrs.empty() ? "" : ", ") + a;
            }
            out.push_back(name + " (max over " + attrs + ")");
        } else {
            for (const auto& a : spec.attributes) {
                out.push_back(name + " (" + a + ")");
            }
        }
    }
    return out;
}

// Objective vector with error rate replaced by accuracy.
inline std::vector<double> display_coordinates(const ObjectiveVector& f)
{
    std::vector<double> out = f;
    out.front() = 1.0 - f.front();
    return out;
}

struct PlotDataOptions {
    double bucket_width = 0.02;
    std::size_t bucket_objective = 0; // 0 = accuracy
    double azimuth = -60.0;
    double elevation = 30.0;
};

// Writes combo_bars.csv, one bucket_NNN.csv per bucket of the best-hypervolume
// run, and manifest.json into `out_dir`; returns the manifest.
inline nlohmann::json write_plot_data(const StudyResults& results, const std::filesystem::path& out_dir,
                                      const PlotDataOptions& opts)
{
    if (results.runs.empty()) {
        throw MissingDataError("study has no completed runs");
    }
    const auto& spec = results.study.cfg.spec;
    const auto labels = objective_labels(spec);
    if (opts.bucket_objective >= labels.size()) {
        throw SchemaError("bucket objective " + std::to_string(opts.bucket_objective) + " out of range (problem has " +
                          std::to_string(labels.size()) + " objectives)");
    }
    std::filesystem::create_directories(out_dir);
    const auto stats = aggregate_runs(results.runs, spec);

    std::ostringstream bars;
    bars << "combo,label,accuracy_mean,accuracy_std,feasible_runs,runs\n";
    for (const auto& s : stats) {
        bars << s.combo << "," << combo_label(s.combo) << ","
             << (s.accuracy ? report::fixed(s.accuracy->mean, 6) : "") << ","
             << (s.accuracy ? report::fixed(s.accuracy->std, 6) : "") << "," << s.feasible_runs << "," << s.runs
             << "\n";
    }
    write_atomic(out_dir / "combo_bars.csv", bars.str());

    nlohmann::json figures = nlohmann::json::array();
    figures.push_back({
        {"name", results.study.name + "-combos"},
        {"kind", "combo-bars"},
        {"title", "Best feasible accuracy per bias-objective combination (" + results.study.name + ")"},
        {"inputs", {"combo_bars.csv"}},
        {"series", results.study.cfg.dataset},
        {"axis_labels", {{"x", "bias objectives met"}, {"y", "accuracy"}}},
        {"runs", results.runs.size()},
        {"threshold", spec.threshold},
    });

    if (labels.size() >= 3) {
        const auto best = best_hypervolume_run(std::span<const RunRecord>(results.runs));
        const auto& run = results.runs[best];
        std::vector<ObjectiveVector> shown;
        for (const auto& f : run.objectives_train) {
            shown.push_back(display_coordinates(f));
        }
        std::vector<std::size_t> axes;
        for (std::size_t k = 0; k < labels.size() && axes.size() < 3; ++k) {
            if (k != opts.bucket_objective || labels.size() == 3) {
                axes.push_back(k);
            }
        }
        const auto buckets = bucket_by_objective(shown, opts.bucket_objective, opts.bucket_width);
        nlohmann::json bucket_meta = nlohmann::json::array();
        std::vector<std::string> files;
        for (const auto& b : buckets) {
            char name[48];
            std::snprintf(name, sizeof name, "bucket_%03zu.csv", files.size());
            std::ostringstream csv;
            csv << "member";
            for (const auto& l : labels) {
                csv << "," << csv::escape(l);
            }
            csv << "\n";
            for (auto i : b.members) {
                csv << i;
                for (double v : shown[i]) {
                    csv << "," << report::fixed(v, 9);
                }
                csv << "\n";
            }
            write_atomic(out_dir / name, csv.str());
            files.emplace_back(name);
            bucket_meta.push_back({{"file", name},
                                   {"index", b.index},
                                   {"lower", b.lower},
                                   {"upper", b.upper},
                                   {"count", b.members.size()}});
        }
        nlohmann::json axis_labels{{"x", labels[axes[0]]}, {"y", labels[axes[1]]}, {"z", labels[axes[2]]}};
        figures.push_back({
            {"name", results.study.name + "-best-run"},
            {"kind", "bucketed-3d"},
            {"title", "Best performing run (" + results.study.name + "), bucketed by " +
                          labels[opts.bucket_objective]},
            {"inputs", files},
            {"axes", {axes[0], axes[1], axes[2]}},
            {"axis_labels", axis_labels},
            {"bucket",
             {{"objective", opts.bucket_objective},
              {"label", labels[opts.bucket_objective]},
              {"width", opts.bucket_width},
              {"buckets", bucket_meta}}},
            {"view", {{"azimuth", opts.azimuth}, {"elevation", opts.elevation}}},
            {"run", run.run},
            {"hypervolume", run.final_hypervolume},
            {"points", shown.size()},
        });
    }

    nlohmann::json manifest{{"study", results.study.name}, {"figures", figures}};
    write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

} // namespace fairmo
