#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fairmo/dataset.hpp"
#include "fairmo/error.hpp"
#include "fairmo/linear_model.hpp"

namespace fairmo {

struct TrainConfig {
    double learning_rate = 0.1;
    // Epochs at the base rate before the 1/sqrt(epoch) decay starts.
    std::size_t warmup_epochs = 0;
    std::size_t max_epochs = 2000;
    double tolerance = 1e-8;
    double l2 = 0.0;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (!(tolerance > 0.0)) {
            throw ContractError("train config: tolerance must be > 0");
        }
        if (max_epochs < 1) {
            throw ContractError("train config: max_epochs must be >= 1");
        }
        if (!(learning_rate > 0.0) || l2 < 0.0) {
            throw ContractError("train config: learning rate must be > 0 and l2 >= 0");
        }
    }

    double rate(std::size_t epoch) const noexcept
    {
        if (epoch <= warmup_epochs) {
            return learning_rate;
        }
        return learning_rate / std::sqrt(static_cast<double>(epoch - warmup_epochs));
    }
};

// log(1 + exp(-t)) without overflow.
inline double log1p_exp_neg(double t) noexcept
{
    return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

inline Eigen::VectorXd label_vector(std::span<const int> y)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = static_cast<double>(y[i]);
    }
    return v;
}

// Mean log-loss over labels in {-1, +1} from precomputed decision values,
// plus (l2 / 2) * ||w||^2; the intercept is not penalised.
inline double logistic_loss_from_decisions(const Eigen::VectorXd& f, const Eigen::VectorXd& y,
                                           const Eigen::VectorXd& w, double l2)
{
    double sum = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        sum += log1p_exp_neg(y(i) * f(i));
    }
    return sum / static_cast<double>(f.size()) + 0.5 * l2 * w.squaredNorm();
}

inline double logistic_loss(const LinearModel& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double l2)
{
    return logistic_loss_from_decisions(decision_values(m, X), y, m.w, l2);
}

struct LossGradient {
    Eigen::VectorXd w;
    double b = 0.0;
};

inline LossGradient logistic_gradient_from_decisions(const Eigen::VectorXd& f, const Eigen::MatrixXd& X,
                                                     const Eigen::VectorXd& y, const Eigen::VectorXd& w, double l2)
{
    // d/df log(1 + exp(-y f)) = -y * sigmoid(-y f)
    Eigen::VectorXd coeff(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        coeff(i) = -y(i) * sigmoid(-y(i) * f(i));
    }
    const double n = static_cast<double>(X.rows());
    LossGradient g;
    g.w = X.transpose() * coeff / n + l2 * w;
    g.b = coeff.sum() / n;
    return g;
}

inline LossGradient logistic_gradient(const LinearModel& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                      double l2)
{
    return logistic_gradient_from_decisions(decision_values(m, X), X, y, m.w, l2);
}

struct TrainResult {
    LinearModel model;
    std::vector<double> loss_history; // loss before epoch 1, then after each epoch
    std::size_t epochs = 0;
    bool converged = false;
};

// Full-batch gradient descent. A step that would raise the loss is retried
// at half the rate, so the recorded loss never increases.
inline TrainResult train_logistic_baseline(const Dataset& train, const TrainConfig& cfg = {})
{
    cfg.validate();
    if (train.rows() == 0) {
        throw ContractError("train_logistic_baseline: empty training set");
    }
    const Eigen::VectorXd y = label_vector(train.y);
    TrainResult r;
    r.model.w = Eigen::VectorXd::Zero(train.X.cols());
    r.model.b = 0.0;
    Eigen::VectorXd f = decision_values(r.model, train.X);
    double loss = logistic_loss_from_decisions(f, y, r.model.w, cfg.l2);
    r.loss_history.push_back(loss);
    double shrink = 1.0;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const auto g = logistic_gradient_from_decisions(f, train.X, y, r.model.w, cfg.l2);
        double next_loss = loss;
        LinearModel next;
        Eigen::VectorXd next_f;
        for (int attempt = 0; attempt < 60; ++attempt) {
            const double eta = cfg.rate(epoch) * shrink;
            next.w = r.model.w - eta * g.w;
            next.b = r.model.b - eta * g.b;
            next_f = decision_values(next, train.X);
            next_loss = logistic_loss_from_decisions(next_f, y, next.w, cfg.l2);
            if (!std::isfinite(next_loss)) {
                throw TrainingError("train_logistic_baseline: non-finite loss at epoch " + std::to_string(epoch));
            }
            if (next_loss <= loss) {
                break;
            }
            shrink *= 0.5;
        }
        r.epochs = epoch;
        if (next_loss > loss) {
            r.converged = true; // no descent step found at any rate
            break;
        }
        const double delta = loss - next_loss;
        r.model = std::move(next);
        f = std::move(next_f);
        loss = next_loss;
        r.loss_history.push_back(loss);
        if (delta < cfg.tolerance) {
            r.converged = true;
            break;
        }
    }
    return r;
}

// Max relative error between the analytic gradient and central differences.
inline double gradient_check(const LinearModel& m, const Eigen::MatrixXd& X, std::span<const int> labels,
                             double l2 = 0.0, double h = 1e-5)
{
    const Eigen::VectorXd y = label_vector(labels);
    const auto g = logistic_gradient(m, X, y, l2);
    Eigen::VectorXd analytic(g.w.size() + 1);
    analytic << g.w, g.b;

    const Eigen::VectorXd x0 = m.packed();
    double worst = 0.0;
    for (Eigen::Index k = 0; k < x0.size(); ++k) {
        Eigen::VectorXd xp = x0;
        Eigen::VectorXd xm = x0;
        xp(k) += h;
        xm(k) -= h;
        const double fp = logistic_loss(LinearModel::unpack({xp.data(), static_cast<std::size_t>(xp.size())}), X, y, l2);
        const double fm = logistic_loss(LinearModel::unpack({xm.data(), static_cast<std::size_t>(xm.size())}), X, y, l2);
        const double numeric = (fp - fm) / (2.0 * h);
        const double scale = std::max({std::abs(analytic(k)), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(analytic(k) - numeric) / scale);
    }
    return worst;
}

} // namespace fairmo
