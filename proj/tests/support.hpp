#pragma once

// Shared fixtures for the unit and acceptance tests: synthetic datasets and
// oracles written without the library's own counting or sorting code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairmo/fairmo.hpp"

namespace fairmo::testing {

inline Dataset make_dataset(Eigen::MatrixXd X, std::vector<int> y, std::map<std::string, std::vector<int>> z,
                            std::string name = "synthetic")
{
    Dataset ds;
    ds.name = std::move(name);
    ds.X = std::move(X);
    ds.y = std::move(y);
    for (const auto& [attr, v] : z) {
        ds.attribute_names.push_back(attr);
    }
    ds.z_attrs = std::move(z);
    for (Eigen::Index k = 0; k < ds.X.cols(); ++k) {
        ds.feature_names.push_back("x" + std::to_string(k));
    }
    ds.validate();
    return ds;
}

// Two features drawn N(0,1); the label depends on x0 and, for group 0, on an
// offset `gap` that makes the groups differ in base rate.
inline Dataset biased_synthetic(std::size_t n, double gap, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), 3);
    std::vector<int> y(n);
    std::vector<int> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = coin(rng) ? 1 : 0;
        const double x0 = normal(rng);
        const double x1 = normal(rng);
        const auto r = static_cast<Eigen::Index>(i);
        X(r, 0) = x0;
        X(r, 1) = x1;
        X(r, 2) = z[i];
        const double score = x0 + 0.3 * x1 + (z[i] == 0 ? -gap : gap) + 0.5 * normal(rng);
        y[i] = score >= 0.0 ? 1 : -1;
    }
    return make_dataset(std::move(X), std::move(y), {{"g", z}});
}

// Rows come in pairs identical except for both sensitive attributes, so any
// model ignoring the z-columns is exactly unbiased on the full set.
inline Dataset symmetric_synthetic(std::size_t pairs, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = 2 * pairs;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), 2);
    std::vector<int> y(n);
    std::vector<int> a(n);
    std::vector<int> b(n);
    for (std::size_t p = 0; p < pairs; ++p) {
        const double x0 = normal(rng);
        const double x1 = normal(rng);
        const int label = x0 + 0.5 * x1 + 0.7 * normal(rng) >= 0.0 ? 1 : -1;
        for (int g = 0; g < 2; ++g) {
            const auto r = static_cast<Eigen::Index>(2 * p + static_cast<std::size_t>(g));
            X(r, 0) = x0;
            X(r, 1) = x1;
            y[2 * p + static_cast<std::size_t>(g)] = label;
            a[2 * p + static_cast<std::size_t>(g)] = g;
            b[2 * p + static_cast<std::size_t>(g)] = (p % 2 == 0) ? g : 1 - g;
        }
    }
    return make_dataset(std::move(X), std::move(y), {{"a", a}, {"b", b}});
}

// ---------------------------------------------------------------------------
// Direct probability oracle for the bias measures: P(event | condition, z)
// by filtering samples, nothing shared with GroupConfusion.

struct Sample {
    int y;
    int yhat;
    int z;
};

struct OracleValue {
    std::optional<double> value; // empty when a conditioning event is empty
};

inline std::optional<double> oracle_probability(const std::vector<Sample>& s, int group,
                                                const std::function<bool(const Sample&)>& condition,
                                                const std::function<bool(const Sample&)>& event)
{
    double num = 0.0;
    double den = 0.0;
    for (const auto& x : s) {
        if (x.z == group && condition(x)) {
            den += 1.0;
            num += event(x) ? 1.0 : 0.0;
        }
    }
    if (den == 0.0) {
        return std::nullopt;
    }
    return num / den;
}

inline OracleValue oracle_measure(const std::vector<Sample>& s, BiasMeasure m)
{
    using P = std::function<bool(const Sample&)>;
    const P any = [](const Sample&) { return true; };
    P condition = any;
    P event;
    switch (m) {
    case BiasMeasure::DI:
        event = [](const Sample& x) { return x.yhat == 1; };
        break;
    case BiasMeasure::EO:
        condition = [](const Sample& x) { return x.y == 1; };
        event = [](const Sample& x) { return x.yhat == 1; };
        break;
    case BiasMeasure::DM_OMR:
        event = [](const Sample& x) { return x.yhat != x.y; };
        break;
    case BiasMeasure::DM_FPR:
        condition = [](const Sample& x) { return x.y == -1; };
        event = [](const Sample& x) { return x.yhat != x.y; };
        break;
    case BiasMeasure::DM_FNR:
        condition = [](const Sample& x) { return x.y == 1; };
        event = [](const Sample& x) { return x.yhat != x.y; };
        break;
    case BiasMeasure::DM_FOR:
        condition = [](const Sample& x) { return x.yhat == -1; };
        event = [](const Sample& x) { return x.yhat != x.y; };
        break;
    case BiasMeasure::DM_FDR:
        condition = [](const Sample& x) { return x.yhat == 1; };
        event = [](const Sample& x) { return x.yhat != x.y; };
        break;
    }
    const auto p0 = oracle_probability(s, 0, condition, event);
    const auto p1 = oracle_probability(s, 1, condition, event);
    if (!p0 || !p1) {
        return {};
    }
    return {std::abs(*p0 - *p1)};
}

struct SampleColumns {
    std::vector<int> y;
    std::vector<int> yhat;
    std::vector<int> z;
};

inline SampleColumns columns(const std::vector<Sample>& s)
{
    SampleColumns c;
    for (const auto& x : s) {
        c.y.push_back(x.y);
        c.yhat.push_back(x.yhat);
        c.z.push_back(x.z);
    }
    return c;
}

// The eight (y, yhat, z) cells.
inline Sample cell(int k)
{
    return {(k & 1) ? 1 : -1, (k & 2) ? 1 : -1, (k & 4) ? 1 : 0};
}

// Calls fn with a materialized sample list for every 8-cell count vector with total in [1, max_total].
inline void for_each_count_vector(int max_total, const std::function<void(const std::vector<Sample>&)>& fn)
{
    std::array<int, 8> counts{};
    std::vector<Sample> samples;
    std::function<void(int, int)> rec = [&](int k, int remaining) {
        if (k == 7) {
            counts[7] = 0;
            for (int c = 0; c <= remaining; ++c) {
                counts[7] = c;
                samples.clear();
                for (int i = 0; i < 8; ++i) {
                    for (int r = 0; r < counts[static_cast<std::size_t>(i)]; ++r) {
                        samples.push_back(cell(i));
                    }
                }
                if (!samples.empty()) {
                    fn(samples);
                }
            }
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[static_cast<std::size_t>(k)] = c;
            rec(k + 1, remaining - c);
        }
    };
    rec(0, max_total);
}

// ---------------------------------------------------------------------------
// Brute-force Pareto fronts and Monte-Carlo hypervolume.

inline bool oracle_dominates(const std::vector<double>& a, const std::vector<double>& b)
{
    bool better = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) {
            return false;
        }
        if (a[k] < b[k]) {
            better = true;
        }
    }
    return better;
}

// Peels fronts by repeated O(n^2) scans of the remaining points.
inline std::vector<std::vector<std::size_t>> brute_force_fronts(const std::vector<std::vector<double>>& pts)
{
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<bool> removed(pts.size(), false);
    std::size_t left = pts.size();
    while (left > 0) {
        std::vector<std::size_t> front;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (removed[i]) {
                continue;
            }
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
                dominated = !removed[j] && j != i && oracle_dominates(pts[j], pts[i]);
            }
            if (!dominated) {
                front.push_back(i);
            }
        }
        for (auto i : front) {
            removed[i] = true;
        }
        left -= front.size();
        fronts.push_back(std::move(front));
    }
    return fronts;
}

inline double monte_carlo_hypervolume(const std::vector<std::vector<double>>& pts, const std::vector<double>& ref,
                                      std::size_t samples, std::uint64_t seed)
{
    std::vector<double> lo(ref.size(), 0.0);
    for (std::size_t k = 0; k < ref.size(); ++k) {
        lo[k] = ref[k];
        for (const auto& p : pts) {
            lo[k] = std::min(lo[k], p[k]);
        }
    }
    double box = 1.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        box *= ref[k] - lo[k];
    }
    std::mt19937_64 rng(seed);
    std::vector<std::uniform_real_distribution<double>> dist;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        dist.emplace_back(lo[k], ref[k]);
    }
    std::size_t hits = 0;
    std::vector<double> u(ref.size());
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t k = 0; k < ref.size(); ++k) {
            u[k] = dist[k](rng);
        }
        for (const auto& p : pts) {
            bool inside = true;
            for (std::size_t k = 0; k < ref.size() && inside; ++k) {
                inside = p[k] <= u[k];
            }
            if (inside) {
                ++hits;
                break;
            }
        }
    }
    return box * static_cast<double>(hits) / static_cast<double>(samples);
}

// Random mutually non-dominated points near the simplex sum = c, inside [0, 1)^d.
inline std::vector<std::vector<double>> random_front(std::size_t n, std::size_t d, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<std::vector<double>> pts;
    while (pts.size() < n) {
        std::vector<double> p(d);
        double norm = 0.0;
        for (auto& v : p) {
            v = u(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (auto& v : p) {
            v = 1.0 - v / norm; // points on a concave shell
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

} // namespace fairmo::testing
