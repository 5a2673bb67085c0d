#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "fairmo/error.hpp"

namespace fairmo {

// Objective values, minimisation convention. Component 0 is the error rate.
using ObjectiveVector = std::vector<double>;

// a <= b componentwise and a < b in at least one component.
inline bool dominates(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw DimensionError("dominates: objective vectors differ in length");
    }
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        strictly = strictly || a[i] < b[i];
    }
    return strictly;
}

// Fast non-dominated sort. Front 0 holds the indices of the non-dominated
// points; front k those that are non-dominated once fronts 0..k-1 are removed.
// Indices within a front are ascending.
inline std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const ObjectiveVector> points)
{
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> domination_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) {
                dominated_by_me[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(points[j], points[i])) {
                dominated_by_me[j].push_back(i);
                ++domination_count[i];
            }
        }
    }
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) {
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current) {
            for (auto j : dominated_by_me[i]) {
                if (--domination_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

// Indices of the non-dominated points, with exact duplicates reduced to their
// first occurrence in visiting order. Points are visited by ascending coordinate sum, since a
// dominating point always has the strictly smaller sum.
inline std::vector<std::size_t> nondominated_filter(std::span<const ObjectiveVector> points)
{
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> sums(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        sums[i] = std::accumulate(points[i].begin(), points[i].end(), 0.0);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sums[a] < sums[b]; });

    std::vector<std::size_t> kept;
    for (auto i : order) {
        const bool covered = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
            return points[k] == points[i] || dominates(points[k], points[i]);
        });
        if (!covered) {
            // rounding in the sums can break the ordering argument
            std::erase_if(kept, [&](std::size_t k) { return dominates(points[i], points[k]); });
            kept.push_back(i);
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace fairmo
