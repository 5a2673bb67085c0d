#pragma once

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fairmo/error.hpp"
#include "fairmo/pareto.hpp"

namespace fairmo {

namespace detail {

// Area dominated by a growing 2-D point set inside [., ref_x] x [., ref_y].
// The staircase keeps the non-dominated points ordered by x (y descending).
class Staircase {
public:
    Staircase(double ref_x, double ref_y) : ref_x_(ref_x), ref_y_(ref_y) {}

    double area() const noexcept { return area_; }

    void insert(double x, double y)
    {
        auto it = steps_.lower_bound(x);
        // height of the covered region just left of x
        double upper = ref_y_;
        if (it != steps_.begin()) {
            upper = std::prev(it)->second;
        }
        if (upper <= y) {
            return; // dominated by a point with smaller x
        }
        if (it != steps_.end() && it->first == x && it->second <= y) {
            return;
        }
        double cursor = x;
        while (it != steps_.end() && it->second >= y) {
            area_ += (it->first - cursor) * (upper - y);
            cursor = it->first;
            upper = it->second;
            it = steps_.erase(it);
        }
        const double right = it == steps_.end() ? ref_x_ : it->first;
        area_ += (right - cursor) * (upper - y);
        steps_.emplace_hint(it, x, y);
    }

private:
    std::map<double, double> steps_;
    double ref_x_;
    double ref_y_;
    double area_ = 0.0;
};

inline double hv2(std::vector<const double*> pts, std::span<const double> ref)
{
    std::sort(pts.begin(), pts.end(), [](const double* a, const double* b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    double area = 0.0;
    double prev_y = ref[1];
    for (const double* p : pts) {
        if (p[1] < prev_y) {
            area += (ref[0] - p[0]) * (prev_y - p[1]);
            prev_y = p[1];
        }
    }
    return area;
}

inline double hv3(std::vector<const double*> pts, std::span<const double> ref)
{
    std::sort(pts.begin(), pts.end(), [](const double* a, const double* b) { return a[2] < b[2]; });
    Staircase front(ref[0], ref[1]);
    double volume = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        front.insert(pts[i][0], pts[i][1]);
        const double next = i + 1 < pts.size() ? pts[i + 1][2] : ref[2];
        volume += front.area() * (next - pts[i][2]);
    }
    return volume;
}

// Dimension sweep: sort on the last coordinate and integrate the (d-1)-dimensional
// volume of the points seen so far over each slab.
inline double hv_recursive(std::vector<const double*> pts, std::span<const double> ref)
{
    const std::size_t d = ref.size();
    if (pts.empty()) {
        return 0.0;
    }
    if (d == 1) {
        double lo = ref[0];
        for (const double* p : pts) {
            lo = std::min(lo, p[0]);
        }
        return ref[0] - lo;
    }
    if (d == 2) {
        return hv2(std::move(pts), ref);
    }
    if (d == 3) {
        return hv3(std::move(pts), ref);
    }
    const std::size_t last = d - 1;
    std::sort(pts.begin(), pts.end(), [last](const double* a, const double* b) { return a[last] < b[last]; });
    double volume = 0.0;
    std::vector<const double*> slice;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        slice.push_back(pts[i]);
        const double next = i + 1 < pts.size() ? pts[i + 1][last] : ref[last];
        const double depth = next - pts[i][last];
        if (depth > 0.0) {
            volume += hv_recursive(slice, ref.first(last)) * depth;
        }
    }
    return volume;
}

inline void check_against_reference(std::span<const ObjectiveVector> points, std::span<const double> ref)
{
    if (ref.empty()) {
        throw ContractError("hypervolume: empty reference point");
    }
    for (const auto& p : points) {
        if (p.size() != ref.size()) {
            throw DimensionError("hypervolume: point dimension differs from reference point");
        }
        for (std::size_t k = 0; k < ref.size(); ++k) {
            if (!(p[k] < ref[k])) {
                throw ContractError("hypervolume: point does not strictly dominate the reference point");
            }
        }
    }
}

inline double box_volume(std::span<const double> p, std::span<const double> ref)
{
    double v = 1.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        v *= ref[k] - p[k];
    }
    return v;
}

} // namespace detail

// Lebesgue measure of the union of the boxes [p, ref]. Every point must lie
// strictly below ref in every coordinate.
inline double hypervolume(std::span<const ObjectiveVector> points, std::span<const double> ref)
{
    detail::check_against_reference(points, ref);
    std::vector<const double*> pts;
    const auto kept = nondominated_filter(points);
    pts.reserve(kept.size());
    for (auto i : kept) {
        pts.push_back(points[i].data());
    }
    return detail::hv_recursive(std::move(pts), ref);
}

// Volume p adds to `others`: box(p) minus the volume of {max(p, q) : q in others}.
inline double exclusive_contribution(std::span<const double> p, std::span<const ObjectiveVector> others,
                                     std::span<const double> ref)
{
    std::vector<ObjectiveVector> clipped;
    clipped.reserve(others.size());
    for (const auto& q : others) {
        ObjectiveVector m(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
            m[k] = std::max(p[k], q[k]);
        }
        clipped.push_back(std::move(m));
    }
    const double box = detail::box_volume(p, ref);
    const double covered = clipped.empty() ? 0.0 : hypervolume(clipped, ref);
    return std::max(0.0, box - covered);
}

namespace detail {

// Two objectives, mutually non-dominated distinct points: each owns the
// rectangle up to its staircase neighbours. Returns nothing for other inputs,
// where removing a point can expose dominated ones.
inline std::optional<std::vector<double>> contributions2(std::span<const ObjectiveVector> points,
                                                         std::span<const double> ref)
{
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (!(points[order[k]][1] < points[order[k - 1]][1])) {
            return std::nullopt;
        }
    }
    std::vector<double> out(points.size(), 0.0);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& p = points[order[k]];
        const double right = k + 1 < order.size() ? points[order[k + 1]][0] : ref[0];
        const double top = k > 0 ? points[order[k - 1]][1] : ref[1];
        out[order[k]] = (right - p[0]) * (top - p[1]);
    }
    return out;
}

} // namespace detail

// contribution[i] = hypervolume(points) - hypervolume(points without i).
inline std::vector<double> hypervolume_contributions(std::span<const ObjectiveVector> points,
                                                     std::span<const double> ref)
{
    detail::check_against_reference(points, ref);
    if (ref.size() == 2) {
        if (auto fast = detail::contributions2(points, ref)) {
            return *fast;
        }
    }
    std::vector<double> out(points.size());
    std::vector<ObjectiveVector> others;
    others.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        others.clear();
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (j != i) {
                others.push_back(points[j]);
            }
        }
        out[i] = exclusive_contribution(points[i], others, ref);
    }
    return out;
}

} // namespace fairmo
