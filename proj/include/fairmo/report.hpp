#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fairmo/csv.hpp"
#include "fairmo/dataset.hpp"
#include "fairmo/experiments.hpp"
#include "fairmo/metrics.hpp"
#include "fairmo/mo_cmaes.hpp"

namespace fairmo::report {

inline std::string fixed(double v, int digits = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string with_commas(std::size_t v)
{
    auto s = std::to_string(v);
    for (auto i = static_cast<std::ptrdiff_t>(s.size()) - 3; i > 0; i -= 3) {
        s.insert(static_cast<std::size_t>(i), ",");
    }
    return s;
}

inline std::string pad(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

inline std::string count_cell(std::size_t count, double percent)
{
    return with_commas(count) + " (" + fixed(percent, 2) + "%)";
}

// Rows are listed non-protected first, then protected, then the total.
inline std::string group_table_text(const std::string& dataset, const GroupOutcomeTable& t)
{
    std::ostringstream out;
    out << dataset << " - distribution of outcomes by " << t.attribute << "\n";
    const std::vector<std::vector<std::string>> rows{
        {"group", "y=-1", "y=+1", "total"},
        {"non-protected (z=1)", count_cell(t.counts[1][0], t.percent(1, 0)), count_cell(t.counts[1][1], t.percent(1, 1)),
         count_cell(t.group_total(1), t.group_total(1) ? 100.0 : 0.0)},
        {"protected (z=0)", count_cell(t.counts[0][0], t.percent(0, 0)), count_cell(t.counts[0][1], t.percent(0, 1)),
         count_cell(t.group_total(0), t.group_total(0) ? 100.0 : 0.0)},
        {"total", count_cell(t.outcome_total(0), t.overall_percent(0)), count_cell(t.outcome_total(1), t.overall_percent(1)),
         count_cell(t.total(), t.total() ? 100.0 : 0.0)},
    };
    std::vector<std::size_t> width(4, 0);
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            width[c] = std::max(width[c], r[c].size());
        }
    }
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            out << pad(r[c], width[c] + 2);
        }
        out << "\n";
    }
    return out.str();
}

inline std::string group_table_csv(const GroupOutcomeTable& t)
{
    std::ostringstream out;
    out << "attribute,group,negative_count,negative_percent,positive_count,positive_percent,total\n";
    for (int g : {1, 0}) {
        out << t.attribute << "," << (g == 1 ? "non-protected" : "protected") << "," << t.counts[g][0] << ","
            << fixed(t.percent(g, 0), 2) << "," << t.counts[g][1] << "," << fixed(t.percent(g, 1), 2) << ","
            << t.group_total(g) << "\n";
    }
    out << t.attribute << ",total," << t.outcome_total(0) << "," << fixed(t.overall_percent(0), 2) << ","
        << t.outcome_total(1) << "," << fixed(t.overall_percent(1), 2) << "," << t.total() << "\n";
    return out.str();
}

inline std::string mean_std_cell(const std::optional<MeanStd>& v)
{
    return v ? fixed(v->mean) + " +- " + fixed(v->std) : "n/a";
}

// Per-run baseline rows plus mean/std aggregates for one split.
struct BaselineSummary {
    MeanStd accuracy;
    std::map<std::string, std::map<BiasMeasure, MeanStd>> bias;
    std::map<std::string, std::map<BiasMeasure, std::size_t>> undefined; // runs hitting the sentinel
};

inline BaselineSummary summarize_baselines(std::span<const BaselineRun> runs, bool test_split)
{
    BaselineSummary s;
    std::vector<double> acc;
    std::map<std::string, std::map<BiasMeasure, std::vector<double>>> values;
    for (const auto& r : runs) {
        const auto& m = test_split ? r.test : r.train;
        acc.push_back(m.accuracy);
        for (const auto& [attr, measures] : m.bias) {
            for (const auto& [id, v] : measures) {
                values[attr][id].push_back(v.value);
                s.undefined[attr][id] += v.undefined ? 1 : 0;
            }
        }
    }
    s.accuracy = mean_std(acc);
    for (const auto& [attr, measures] : values) {
        for (const auto& [id, v] : measures) {
            s.bias[attr][id] = mean_std(v);
        }
    }
    return s;
}

inline std::string baseline_csv(const std::string& dataset, std::span<const BaselineRun> runs)
{
    std::ostringstream out;
    out << "dataset,run,split,split_seed,epochs,attribute,accuracy";
    for (auto m : all_bias_measures) {
        out << "," << to_string(m) << "," << to_string(m) << "_undefined";
    }
    out << "\n";
    for (const auto& r : runs) {
        for (int s = 0; s < 2; ++s) {
            const auto& m = s == 0 ? r.train : r.test;
            for (const auto& [attr, measures] : m.bias) {
                out << dataset << "," << r.run << "," << (s == 0 ? "train" : "test") << "," << r.split_seed << ","
                    << r.epochs << "," << attr << "," << fixed(m.accuracy, 6);
                for (auto id : all_bias_measures) {
                    const auto& v = measures.at(id);
                    out << "," << fixed(v.value, 6) << "," << (v.undefined ? 1 : 0);
                }
                out << "\n";
            }
        }
    }
    return out.str();
}

inline std::string baseline_aggregate_csv(const std::string& dataset, const BaselineSummary& train,
                                          const BaselineSummary& test)
{
    std::ostringstream out;
    out << "dataset,split,attribute,accuracy_mean,accuracy_std";
    for (auto m : all_bias_measures) {
        out << "," << to_string(m) << "_mean," << to_string(m) << "_std";
    }
    out << "\n";
    for (int s = 0; s < 2; ++s) {
        const auto& sum = s == 0 ? train : test;
        for (const auto& [attr, measures] : sum.bias) {
            out << dataset << "," << (s == 0 ? "train" : "test") << "," << attr << "," << fixed(sum.accuracy.mean, 6)
                << "," << fixed(sum.accuracy.std, 6);
            for (auto id : all_bias_measures) {
                out << "," << fixed(measures.at(id).mean, 6) << "," << fixed(measures.at(id).std, 6);
            }
            out << "\n";
        }
    }
    return out.str();
}

// Accuracy, DI, EO and DM (OMR) as mean +- std per attribute.
inline std::string baseline_table_text(const std::string& dataset, const BaselineSummary& s, std::size_t runs)
{
    std::ostringstream out;
    out << "Unconstrained logistic regression, " << dataset << ", " << runs << " runs (training data)\n";
    out << pad("attribute", 12) << pad("accuracy", 20) << pad("DI", 20) << pad("EO", 20) << pad("DM (OMR)", 20)
        << "\n";
    bool first = true;
    for (const auto& [attr, m] : s.bias) {
        out << pad(attr, 12) << pad(first ? mean_std_cell(s.accuracy) : "", 20)
            << pad(mean_std_cell(m.at(BiasMeasure::DI)), 20) << pad(mean_std_cell(m.at(BiasMeasure::EO)), 20)
            << pad(mean_std_cell(m.at(BiasMeasure::DM_OMR)), 20) << "\n";
        first = false;
    }
    return out.str();
}

inline std::string combo_table_text(const std::string& title, const RunStats& stats)
{
    std::ostringstream out;
    out << title << "\n";
    out << " #  DI EO DM  " << pad("accuracy (mean +- std)", 24) << "feasible runs\n";
    for (const auto& s : stats) {
        const auto mask = combo_mask(s.combo);
        out << " " << s.combo << "  " << ((mask & 1U) ? "x " : "  ") << " " << ((mask & 2U) ? "x " : "  ") << " "
            << ((mask & 4U) ? "x " : "  ") << "  "
            << pad(s.applicable ? mean_std_cell(s.accuracy) : "-", 24) << s.feasible_runs << "/" << s.runs << "\n";
    }
    return out.str();
}

inline std::string combo_table_csv(const RunStats& stats)
{
    std::ostringstream out;
    out << "combo,label,DI,EO,DM,applicable,accuracy_mean,accuracy_std,feasible_runs,runs\n";
    for (const auto& s : stats) {
        const auto mask = combo_mask(s.combo);
        out << s.combo << "," << combo_label(s.combo) << "," << (mask & 1U ? 1 : 0) << "," << (mask & 2U ? 1 : 0) << ","
            << (mask & 4U ? 1 : 0) << "," << (s.applicable ? 1 : 0) << ","
            << (s.accuracy ? fixed(s.accuracy->mean, 6) : "n/a") << ","
            << (s.accuracy ? fixed(s.accuracy->std, 6) : "n/a") << "," << s.feasible_runs << "," << s.runs << "\n";
    }
    return out.str();
}

inline std::string marginal_impact_text(const std::array<std::optional<double>, combo_count>& deltas)
{
    std::ostringstream out;
    out << "Marginal impact of two-attribute objectives (percentage points)\n";
    for (int c = 1; c <= combo_count; ++c) {
        const auto& d = deltas[static_cast<std::size_t>(c - 1)];
        out << " " << c << "  " << pad(combo_label(c), 10) << (d ? fixed(*d, 2) + "%" : "n/a") << "\n";
    }
    return out.str();
}

inline std::string trace_csv(std::span<const TraceRow> trace)
{
    std::ostringstream out;
    out << "generation,archive_size,hypervolume,best_error_rate\n";
    for (const auto& t : trace) {
        out << t.generation << "," << t.archive_size << "," << fixed(t.hypervolume, 12) << "," << fixed(t.best_error, 6)
            << "\n";
    }
    return out.str();
}

// One JSON object per (run, combo).
inline std::string per_run_jsonl(const StudyConfig& cfg, std::span<const RunRecord> runs)
{
    std::ostringstream out;
    for (const auto& r : runs) {
        for (int c = 1; c <= combo_count; ++c) {
            nlohmann::json j{
                {"dataset", cfg.dataset},
                {"run", r.run},
                {"combo", c},
                {"label", combo_label(c)},
                {"applicable", combo_applicable(c, cfg.spec)},
                {"best_accuracy", optional_json(r.best[static_cast<std::size_t>(c - 1)])},
                {"split_seed", r.split_seed},
                {"ea_seed", r.ea_seed},
                {"archive_size", r.objectives_train.size()},
                {"final_hypervolume", r.final_hypervolume},
                {"baseline_train_accuracy", r.baseline_train_accuracy},
            };
            out << j.dump() << "\n";
        }
    }
    return out.str();
}

} // namespace fairmo::report
