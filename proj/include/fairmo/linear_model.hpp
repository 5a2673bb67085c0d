#pragma once

#include <cmath>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fairmo/error.hpp"

namespace fairmo {

struct LinearModel {
    Eigen::VectorXd w;
    double b = 0.0;

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(w.size()); }

    // Flattened (w, b); the optimizer's search vector.
    Eigen::VectorXd packed() const
    {
        Eigen::VectorXd x(w.size() + 1);
        x << w, b;
        return x;
    }

    static LinearModel unpack(std::span<const double> x)
    {
        if (x.empty()) {
            throw DimensionError("linear model: empty parameter vector");
        }
        LinearModel m;
        m.w = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size() - 1));
        m.b = x.back();
        return m;
    }
};

inline double decision_value(const LinearModel& m, const Eigen::Ref<const Eigen::VectorXd>& x)
{
    if (x.size() != m.w.size()) {
        throw DimensionError("decision_value: expected " + std::to_string(m.w.size()) + " features, got " +
                             std::to_string(x.size()));
    }
    return m.w.dot(x) + m.b;
}

inline Eigen::VectorXd decision_values(const LinearModel& m, const Eigen::MatrixXd& X)
{
    if (X.cols() != m.w.size()) {
        throw DimensionError("predict: expected " + std::to_string(m.w.size()) + " columns, got " +
                             std::to_string(X.cols()));
    }
    return (X * m.w).array() + m.b;
}

// +1 iff the decision value is >= 0.
inline std::vector<int> predict(const LinearModel& m, const Eigen::MatrixXd& X)
{
    const auto f = decision_values(m, X);
    std::vector<int> yhat(static_cast<std::size_t>(f.size()));
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        yhat[static_cast<std::size_t>(i)] = f(i) >= 0.0 ? 1 : -1;
    }
    return yhat;
}

inline double sigmoid(double t) noexcept
{
    if (t >= 0.0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

inline Eigen::VectorXd predict_proba(const LinearModel& m, const Eigen::MatrixXd& X)
{
    return decision_values(m, X).unaryExpr([](double t) { return sigmoid(t); });
}

inline nlohmann::json to_json(const LinearModel& m, const std::vector<std::string>& feature_names,
                              const nlohmann::json& metadata = nlohmann::json::object())
{
    return {
        {"feature_names", feature_names},
        {"w", std::vector<double>(m.w.data(), m.w.data() + m.w.size())},
        {"b", m.b},
        {"metadata", metadata},
    };
}

inline LinearModel model_from_json(const nlohmann::json& j)
{
    const auto w = j.at("w").get<std::vector<double>>();
    LinearModel m;
    m.w = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    m.b = j.at("b").get<double>();
    if (j.contains("feature_names") && j.at("feature_names").size() != w.size()) {
        throw DimensionError("model record: feature name count differs from weight count");
    }
    if (!m.w.allFinite() || !std::isfinite(m.b)) {
        throw DataError("model record: non-finite parameter");
    }
    return m;
}

} // namespace fairmo
