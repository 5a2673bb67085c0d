#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairmo/error.hpp"

namespace fairmo {

// Actual labels, predictions (both in {-1, +1}) and group membership (in {0, 1}).
struct LabeledPredictions {
    std::span<const int> y;
    std::span<const int> yhat;
    std::span<const int> z;

    void validate() const
    {
        if (y.size() != yhat.size() || y.size() != z.size()) {
            throw DimensionError("labeled predictions: length mismatch");
        }
        auto is_label = [](int v) { return v == -1 || v == 1; };
        auto is_group = [](int v) { return v == 0 || v == 1; };
        if (!std::all_of(y.begin(), y.end(), is_label) || !std::all_of(yhat.begin(), yhat.end(), is_label)) {
            throw DataError("labeled predictions: labels must be -1 or +1");
        }
        if (!std::all_of(z.begin(), z.end(), is_group)) {
            throw DataError("labeled predictions: groups must be 0 or 1");
        }
    }
};

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t n() const noexcept { return tp + fp + tn + fn; }
    std::size_t predicted_positive() const noexcept { return tp + fp; }
    std::size_t predicted_negative() const noexcept { return tn + fn; }
    std::size_t actual_positive() const noexcept { return tp + fn; }
    std::size_t actual_negative() const noexcept { return tn + fp; }
    std::size_t errors() const noexcept { return fp + fn; }

    void add(int y, int yhat) noexcept
    {
        if (y > 0) {
            ++(yhat > 0 ? tp : fn);
        } else {
            ++(yhat > 0 ? fp : tn);
        }
    }

    bool operator==(const ConfusionCounts&) const = default;
};

struct GroupConfusion {
    std::array<ConfusionCounts, 2> group{}; // indexed by z

    std::size_t n() const noexcept { return group[0].n() + group[1].n(); }
};

inline GroupConfusion confusion_by_group(const LabeledPredictions& lp)
{
    lp.validate();
    GroupConfusion gc;
    for (std::size_t i = 0; i < lp.y.size(); ++i) {
        gc.group[static_cast<std::size_t>(lp.z[i])].add(lp.y[i], lp.yhat[i]);
    }
    return gc;
}

inline double accuracy(const GroupConfusion& gc)
{
    const auto n = gc.n();
    if (n == 0) {
        return 0.0;
    }
    const auto correct = gc.group[0].tp + gc.group[0].tn + gc.group[1].tp + gc.group[1].tn;
    return static_cast<double>(correct) / static_cast<double>(n);
}

enum class BiasMeasure { DI, EO, DM_OMR, DM_FPR, DM_FNR, DM_FOR, DM_FDR };

inline constexpr std::array<BiasMeasure, 7> all_bias_measures{
    BiasMeasure::DI,     BiasMeasure::EO,     BiasMeasure::DM_OMR, BiasMeasure::DM_FPR,
    BiasMeasure::DM_FNR, BiasMeasure::DM_FOR, BiasMeasure::DM_FDR,
};

constexpr std::string_view to_string(BiasMeasure m) noexcept
{
    switch (m) {
    case BiasMeasure::DI: return "DI";
    case BiasMeasure::EO: return "EO";
    case BiasMeasure::DM_OMR: return "DM_OMR";
    case BiasMeasure::DM_FPR: return "DM_FPR";
    case BiasMeasure::DM_FNR: return "DM_FNR";
    case BiasMeasure::DM_FOR: return "DM_FOR";
    case BiasMeasure::DM_FDR: return "DM_FDR";
    }
    return "?";
}

// Accepts the canonical names; "DM" is shorthand for DM_OMR.
inline BiasMeasure parse_bias_measure(std::string_view s)
{
    if (s == "DM") {
        return BiasMeasure::DM_OMR;
    }
    for (auto m : all_bias_measures) {
        if (to_string(m) == s) {
            return m;
        }
    }
    throw SchemaError("unknown bias measure '" + std::string(s) + "'");
}

struct BiasValue {
    double value = 0.0;
    // A conditioning event was empty in at least one group; value is the 1.0 sentinel.
    bool undefined = false;
};

namespace detail {

struct Ratio {
    std::size_t num;
    std::size_t den;
};

// The group-conditional probability each measure compares across groups.
inline Ratio conditional(const ConfusionCounts& c, BiasMeasure m) noexcept
{
    switch (m) {
    case BiasMeasure::DI: return {c.predicted_positive(), c.n()};
    case BiasMeasure::EO: return {c.tp, c.actual_positive()};
    case BiasMeasure::DM_OMR: return {c.errors(), c.n()};
    case BiasMeasure::DM_FPR: return {c.fp, c.actual_negative()};
    case BiasMeasure::DM_FNR: return {c.fn, c.actual_positive()};
    case BiasMeasure::DM_FOR: return {c.fn, c.predicted_negative()};
    case BiasMeasure::DM_FDR: return {c.fp, c.predicted_positive()};
    }
    return {0, 0};
}

} // namespace detail

// |P(event | condition, z=0) - P(event | condition, z=1)| from empirical frequencies.
inline BiasValue bias_measure(const GroupConfusion& gc, BiasMeasure m) noexcept
{
    const auto a = detail::conditional(gc.group[0], m);
    const auto b = detail::conditional(gc.group[1], m);
    if (a.den == 0 || b.den == 0) {
        return {1.0, true};
    }
    const double pa = static_cast<double>(a.num) / static_cast<double>(a.den);
    const double pb = static_cast<double>(b.num) / static_cast<double>(b.den);
    return {std::abs(pa - pb), false};
}

// Error rate followed by bias components. Without collapse there is one
// component per (measure, attribute), measure-major; with collapse one per
// measure holding the maximum over attributes.
struct ObjectiveEvaluation {
    std::vector<double> values;
    std::vector<bool> undefined;
};

inline ObjectiveEvaluation bias_vector(std::span<const int> y, std::span<const int> yhat,
                                       const std::map<std::string, std::vector<int>>& z_attrs,
                                       std::span<const BiasMeasure> measures, std::span<const std::string> attrs,
                                       bool collapse)
{
    if (y.size() != yhat.size()) {
        throw DimensionError("bias_vector: length mismatch");
    }
    std::vector<GroupConfusion> confusions;
    confusions.reserve(attrs.size());
    for (const auto& a : attrs) {
        const auto it = z_attrs.find(a);
        if (it == z_attrs.end()) {
            throw SchemaError("bias_vector: unknown attribute '" + a + "'");
        }
        confusions.push_back(confusion_by_group({y, yhat, it->second}));
    }

    std::size_t correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        correct += (y[i] == yhat[i]) ? 1 : 0;
    }
    ObjectiveEvaluation out;
    out.values.push_back(y.empty() ? 1.0 : 1.0 - static_cast<double>(correct) / static_cast<double>(y.size()));
    out.undefined.push_back(false);

    for (auto m : measures) {
        if (collapse) {
            BiasValue worst{0.0, false};
            for (const auto& gc : confusions) {
                const auto v = bias_measure(gc, m);
                worst.value = std::max(worst.value, v.value);
                worst.undefined = worst.undefined || v.undefined;
            }
            out.values.push_back(worst.value);
            out.undefined.push_back(worst.undefined);
        } else {
            for (const auto& gc : confusions) {
                const auto v = bias_measure(gc, m);
                out.values.push_back(v.value);
                out.undefined.push_back(v.undefined);
            }
        }
    }
    return out;
}

} // namespace fairmo
