#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fairmo/error.hpp"
#include "fairmo/hypervolume.hpp"
#include "fairmo/pareto.hpp"
#include "fairmo/rng.hpp"

namespace fairmo {

// Maps a search vector to an objective vector; must be deterministic.
struct Problem {
    std::size_t dimension = 0;
    std::size_t objectives = 0;
    std::function<ObjectiveVector(std::span<const double>)> evaluate;

    ObjectiveVector operator()(const Eigen::VectorXd& x) const
    {
        auto f = evaluate({x.data(), static_cast<std::size_t>(x.size())});
        if (f.size() != objectives) {
            throw DimensionError("problem returned " + std::to_string(f.size()) + " objectives, expected " +
                                 std::to_string(objectives));
        }
        return f;
    }
};

// Constants of the elitist MO-CMA-ES with success-rule step-size control.
struct StrategyParams {
    double p_target = 1.0 / 5.5;
    double damping = 1.0;          // d
    double c_success = 0.0;        // c_p
    double c_path = 0.0;           // c_c
    double c_cov = 0.0;
    double p_threshold = 0.44;
    double sigma_min = 1e-12;
    double sigma_max = 1e6;
    double eigen_floor = 1e-12;

    static StrategyParams defaults(std::size_t n)
    {
        const double dn = static_cast<double>(n);
        StrategyParams s;
        s.damping = 1.0 + dn / 2.0;
        s.c_success = s.p_target / (2.0 + s.p_target);
        s.c_path = 2.0 / (dn + 2.0);
        s.c_cov = 2.0 / (dn * dn + 6.0);
        return s;
    }
};

// Config-level overrides; unset fields keep their dimension-derived defaults.
struct StrategyOverrides {
    std::optional<double> p_target;
    std::optional<double> damping;
    std::optional<double> c_success;
    std::optional<double> c_path;
    std::optional<double> c_cov;
    std::optional<double> p_threshold;

    StrategyParams apply(StrategyParams s) const
    {
        s.p_target = p_target.value_or(s.p_target);
        s.damping = damping.value_or(s.damping);
        s.c_success = c_success.value_or(s.c_success);
        s.c_path = c_path.value_or(s.c_path);
        s.c_cov = c_cov.value_or(s.c_cov);
        s.p_threshold = p_threshold.value_or(s.p_threshold);
        return s;
    }
};

struct Individual {
    Eigen::VectorXd x;
    double sigma = 0.3;
    double p_succ = 0.0;
    Eigen::VectorXd p_c;
    Eigen::MatrixXd C;
    Eigen::MatrixXd A; // lower Cholesky factor, C = A A^T
    Eigen::VectorXd last_step; // A z of the mutation that produced x
    ObjectiveVector f;

    static Individual create(Eigen::VectorXd x, double sigma, const StrategyParams& params)
    {
        const auto n = x.size();
        Individual ind;
        ind.x = std::move(x);
        ind.sigma = sigma;
        ind.p_succ = params.p_target;
        ind.p_c = Eigen::VectorXd::Zero(n);
        ind.C = Eigen::MatrixXd::Identity(n, n);
        ind.A = Eigen::MatrixXd::Identity(n, n);
        ind.last_step = Eigen::VectorXd::Zero(n);
        return ind;
    }
};

// Symmetrises C and refreshes its Cholesky factor; if C lost positive
// definiteness its eigenvalues are floored and C rebuilt.
inline void recondition(Individual& ind, double eigen_floor)
{
    ind.C = 0.5 * (ind.C + ind.C.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(ind.C);
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
        ind.A = llt.matrixL();
        return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ind.C);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(eigen_floor);
    ind.C = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    ind.C = 0.5 * (ind.C + ind.C.transpose()).eval();
    ind.A = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
}

// x' = x + sigma * N(0, C). Strategy state is copied from the parent.
inline Individual mutate(const Individual& parent, Rng& rng)
{
    Individual child = parent;
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(parent.x.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z(i) = normal(rng);
    }
    child.last_step = parent.A * z;
    child.x = parent.x + parent.sigma * child.last_step;
    child.f.clear();
    return child;
}

inline void update_step_size(Individual& ind, bool success, const StrategyParams& s)
{
    ind.p_succ = (1.0 - s.c_success) * ind.p_succ + s.c_success * (success ? 1.0 : 0.0);
    ind.sigma *= std::exp((ind.p_succ - s.p_target) / (s.damping * (1.0 - s.p_target)));
    ind.sigma = std::clamp(ind.sigma, s.sigma_min, s.sigma_max);
}

// Rank-one update along the evolution path; `step` is (x_child - x_parent) / sigma_parent.
inline void update_covariance(Individual& ind, const Eigen::VectorXd& step, const StrategyParams& s)
{
    if (ind.p_succ < s.p_threshold) {
        ind.p_c = (1.0 - s.c_path) * ind.p_c + std::sqrt(s.c_path * (2.0 - s.c_path)) * step;
        ind.C = (1.0 - s.c_cov) * ind.C + s.c_cov * ind.p_c * ind.p_c.transpose();
    } else {
        ind.p_c = (1.0 - s.c_path) * ind.p_c;
        ind.C = (1.0 - s.c_cov) * ind.C +
                s.c_cov * (ind.p_c * ind.p_c.transpose() + s.c_path * (2.0 - s.c_path) * ind.C);
    }
    recondition(ind, s.eigen_floor);
}

// Success-rule adaptation of a parent and its offspring; the offspring's
// covariance follows its own mutation step only when it survived selection.
inline void adapt(Individual& parent, Individual& offspring, bool success, const StrategyParams& s)
{
    update_step_size(parent, success, s);
    update_step_size(offspring, success, s);
    if (success) {
        update_covariance(offspring, offspring.last_step, s);
    }
}

struct ArchiveEntry {
    Eigen::VectorXd x;
    ObjectiveVector f;
};

// Mutually non-dominated evaluated points with an incrementally maintained
// hypervolume. When full, the member with the smallest exclusive contribution
// (the newcomer included) is evicted, so the volume never decreases.
class ParetoArchive {
public:
    ParetoArchive(std::size_t capacity, ObjectiveVector reference) : capacity_(capacity), ref_(std::move(reference))
    {
        if (capacity_ == 0) {
            throw ContractError("archive: capacity must be positive");
        }
    }

    const std::vector<ArchiveEntry>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    const ObjectiveVector& reference() const noexcept { return ref_; }
    double hypervolume() const noexcept { return volume_; }

    std::vector<ObjectiveVector> objectives() const
    {
        std::vector<ObjectiveVector> out;
        out.reserve(members_.size());
        for (const auto& m : members_) {
            out.push_back(m.f);
        }
        return out;
    }

    // Returns true if the point was stored.
    bool offer(const Eigen::VectorXd& x, const ObjectiveVector& f)
    {
        if (f.size() != ref_.size()) {
            throw DimensionError("archive: objective count differs from reference point");
        }
        for (std::size_t k = 0; k < f.size(); ++k) {
            if (!(f[k] < ref_[k])) {
                return false; // outside the measured region
            }
        }
        for (const auto& m : members_) {
            if (m.f == f || dominates(m.f, f)) {
                return false;
            }
        }
        const auto current = objectives();
        const double gain = exclusive_contribution(f, current, ref_);
        std::erase_if(members_, [&](const ArchiveEntry& m) { return dominates(f, m.f); });
        members_.push_back({x, f});

        if (members_.size() <= capacity_) {
            volume_ += gain;
            return true;
        }
        const auto contrib = hypervolume_contributions(objectives(), ref_);
        const auto worst = static_cast<std::size_t>(std::min_element(contrib.begin(), contrib.end()) - contrib.begin());
        if (worst == members_.size() - 1) {
            members_.pop_back();
            return false;
        }
        volume_ += contrib.back() - contrib[worst];
        members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(worst));
        return true;
    }

    // No dominated pair, size within capacity, all points inside the reference box.
    bool invariants_hold() const
    {
        if (members_.size() > capacity_) {
            return false;
        }
        for (std::size_t i = 0; i < members_.size(); ++i) {
            for (std::size_t k = 0; k < ref_.size(); ++k) {
                if (!(members_[i].f[k] < ref_[k])) {
                    return false;
                }
            }
            for (std::size_t j = 0; j < members_.size(); ++j) {
                if (i != j && dominates(members_[i].f, members_[j].f)) {
                    return false;
                }
            }
        }
        return true;
    }

private:
    std::size_t capacity_;
    ObjectiveVector ref_;
    std::vector<ArchiveEntry> members_;
    double volume_ = 0.0;
};

struct EAConfig {
    std::size_t population = 50; // mu
    std::size_t generations = 500;
    std::uint64_t seed = 0;
    double initial_sigma = 0.3;
    std::size_t archive_capacity = 1000;
    double reference_value = 1.1; // per objective
    // Individuals are spread evenly over the anchors and jittered with N(0, jitter^2).
    std::vector<Eigen::VectorXd> anchors;
    double init_jitter = 0.1;
    StrategyOverrides strategy;

    void validate() const
    {
        if (population < 2) {
            throw ContractError("EA config: population must be >= 2");
        }
        if (generations < 1) {
            throw ContractError("EA config: generations must be >= 1");
        }
        if (!(initial_sigma > 0.0) || archive_capacity == 0) {
            throw ContractError("EA config: sigma must be > 0 and archive capacity positive");
        }
    }
};

struct TraceRow {
    std::size_t generation = 0;
    std::size_t archive_size = 0;
    double hypervolume = 0.0;
    double best_error = 1.0;
};

struct EAState {
    std::vector<Individual> population;
    ParetoArchive archive;
    StrategyParams params;
};

namespace detail {

// Indices of the `keep` best pool members: whole fronts first, the overflowing
// front thinned by repeatedly dropping its smallest hypervolume contributor.
// Pool points may lie outside `ref`; the thinning reference is widened to cover them.
inline std::vector<std::size_t> select_best(const std::vector<ObjectiveVector>& pool, std::size_t keep,
                                            std::span<const double> reference)
{
    std::vector<double> ref(reference.begin(), reference.end());
    for (const auto& f : pool) {
        for (std::size_t k = 0; k < ref.size(); ++k) {
            ref[k] = std::max(ref[k], f[k] + 0.1);
        }
    }
    std::vector<std::size_t> chosen;
    for (auto& front : nondominated_sort(pool)) {
        if (chosen.size() + front.size() <= keep) {
            chosen.insert(chosen.end(), front.begin(), front.end());
            if (chosen.size() == keep) {
                break;
            }
            continue;
        }
        while (chosen.size() + front.size() > keep) {
            std::vector<ObjectiveVector> pts;
            pts.reserve(front.size());
            for (auto i : front) {
                pts.push_back(pool[i]);
            }
            const auto contrib = hypervolume_contributions(pts, ref);
            // ties go to the later pool member (offspring come after parents)
            std::size_t worst = 0;
            for (std::size_t k = 1; k < contrib.size(); ++k) {
                if (contrib[k] <= contrib[worst]) {
                    worst = k;
                }
            }
            front.erase(front.begin() + static_cast<std::ptrdiff_t>(worst));
        }
        chosen.insert(chosen.end(), front.begin(), front.end());
        break;
    }
    return chosen;
}

inline ObjectiveVector reference_point(std::size_t objectives, double value)
{
    return ObjectiveVector(objectives, value);
}

} // namespace detail

inline EAState initialize(const Problem& problem, const EAConfig& cfg, Rng& rng)
{
    cfg.validate();
    const auto n = problem.dimension;
    EAState state{{}, ParetoArchive(cfg.archive_capacity, detail::reference_point(problem.objectives, cfg.reference_value)),
                  cfg.strategy.apply(StrategyParams::defaults(n))};
    for (const auto& a : cfg.anchors) {
        if (static_cast<std::size_t>(a.size()) != n) {
            throw DimensionError("EA config: anchor dimension differs from problem dimension");
        }
    }
    std::normal_distribution<double> normal(0.0, cfg.init_jitter);
    for (std::size_t i = 0; i < cfg.population; ++i) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        if (!cfg.anchors.empty()) {
            x = cfg.anchors[i * cfg.anchors.size() / cfg.population];
        }
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            x(k) += normal(rng);
        }
        auto ind = Individual::create(std::move(x), cfg.initial_sigma, state.params);
        ind.f = problem(ind.x);
        state.archive.offer(ind.x, ind.f);
        state.population.push_back(std::move(ind));
    }
    return state;
}

// One (mu + mu) generation: one offspring per parent, archive update,
// environmental selection, then success-rule adaptation.
inline void step(EAState& state, const Problem& problem, Rng& rng)
{
    const std::size_t mu = state.population.size();
    std::vector<Individual> offspring;
    offspring.reserve(mu);
    for (const auto& parent : state.population) {
        offspring.push_back(mutate(parent, rng));
    }
    for (auto& child : offspring) {
        child.f = problem(child.x);
        state.archive.offer(child.x, child.f);
    }

    std::vector<ObjectiveVector> pool;
    pool.reserve(2 * mu);
    for (const auto& p : state.population) {
        pool.push_back(p.f);
    }
    for (const auto& c : offspring) {
        pool.push_back(c.f);
    }
    const auto chosen = detail::select_best(pool, mu, state.archive.reference());
    std::vector<bool> selected(2 * mu, false);
    for (auto i : chosen) {
        selected[i] = true;
    }
    for (std::size_t i = 0; i < mu; ++i) {
        adapt(state.population[i], offspring[i], selected[mu + i], state.params);
    }

    std::vector<Individual> next;
    next.reserve(mu);
    for (auto i : chosen) {
        next.push_back(i < mu ? std::move(state.population[i]) : std::move(offspring[i - mu]));
    }
    state.population = std::move(next);
}

struct RunResult {
    ParetoArchive archive;
    std::vector<Individual> population;
    std::vector<TraceRow> trace; // generation 0 is the initial population
};

inline TraceRow trace_row(std::size_t generation, const ParetoArchive& archive)
{
    TraceRow row{generation, archive.size(), archive.hypervolume(), 1.0};
    for (const auto& m : archive.members()) {
        row.best_error = std::min(row.best_error, m.f.front());
    }
    return row;
}

using GenerationCallback = std::function<void(const EAState&, const TraceRow&)>;

inline RunResult run(const Problem& problem, const EAConfig& cfg, const GenerationCallback& on_generation = {})
{
    Rng rng(cfg.seed);
    auto state = initialize(problem, cfg, rng);
    std::vector<TraceRow> trace;
    trace.push_back(trace_row(0, state.archive));
    if (on_generation) {
        on_generation(state, trace.back());
    }
    for (std::size_t g = 1; g <= cfg.generations; ++g) {
        step(state, problem, rng);
        trace.push_back(trace_row(g, state.archive));
        if (on_generation) {
            on_generation(state, trace.back());
        }
    }
    return {std::move(state.archive), std::move(state.population), std::move(trace)};
}

} // namespace fairmo
