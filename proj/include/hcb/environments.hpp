#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hcb/arm_stats.hpp"
#include "hcb/ridge.hpp"
#include "hcb/rng.hpp"

namespace hcb {

/// Reward oracle for the classical setting: fixed (unknown to the policy)
/// arm means plus a sampler. Replay-based environments carry per-trial
/// cursor state, hence draw() is non-const and trials use fresh clones.
class ClassicalEnv {
public:
    virtual ~ClassicalEnv() = default;
    virtual std::unique_ptr<ClassicalEnv> clone() const = 0;

    virtual int num_arms() const = 0;
    virtual const ClusterMap& clusters() const = 0;
    virtual double draw(ArmId arm, RngStream& rng) = 0;
    /// Expected reward of the arm as realized by draw() (post-clipping).
    virtual double mean(ArmId arm) const = 0;
    /// Declared reward range, used for meta-level normalization.
    virtual std::pair<double, double> reward_range() const = 0;
    /// Shuffle replay cursors for a new trial; no-op for i.i.d. samplers.
    virtual void reset_replay(RngStream&) {}
    virtual void describe(nlohmann::json& out) const = 0;

    ArmId best_arm() const {
        ArmId best = 0;
        for (ArmId k = 1; k < num_arms(); ++k) {
            if (mean(k) > mean(best)) best = k;
        }
        return best;
    }
    double best_mean() const { return mean(best_arm()); }
};

/// Reward oracle for the contextual setting. next_context() yields the
/// round's context (false once a finite dataset is exhausted); expected()
/// and draw() refer to that round.
class ContextualEnv {
public:
    virtual ~ContextualEnv() = default;
    virtual std::unique_ptr<ContextualEnv> clone() const = 0;

    virtual int num_arms() const = 0;
    virtual int dim() const = 0;
    virtual const ClusterMap& clusters() const = 0;
    virtual bool next_context(Eigen::VectorXd& x, RngStream& rng) = 0;
    virtual double draw(ArmId arm, const Eigen::VectorXd& x, RngStream& rng) = 0;
    virtual double expected(ArmId arm, const Eigen::VectorXd& x) const = 0;
    virtual std::pair<double, double> reward_range() const = 0;
    virtual void reset_replay(RngStream&) {}
    virtual void describe(nlohmann::json& out) const = 0;

    double best_expected(const Eigen::VectorXd& x) const {
        double best = expected(0, x);
        for (ArmId k = 1; k < num_arms(); ++k) best = std::max(best, expected(k, x));
        return best;
    }
    ArmId best_arm(const Eigen::VectorXd& x) const {
        ArmId best = 0;
        for (ArmId k = 1; k < num_arms(); ++k) {
            if (expected(k, x) > expected(best, x)) best = k;
        }
        return best;
    }
};

// ---------------------------------------------------------------------------
// Synthetic classical bandit
// ---------------------------------------------------------------------------

struct SyntheticClassicalSpec {
    int num_clusters = 10;
    int num_arms = 100;
    double history_fraction = 0.25;
    double history_mean = 10.0;  // Poisson parameter for per-arm history size
    double alpha_lo = 0.9;       // per-arm scale, i.i.d. uniform with mean 1
    double alpha_hi = 1.1;
};

/// Cluster centroid lambda(i) = (u + 1/i)/2 for 1-based cluster index i.
double lambda_centroid(double u, int one_based_cluster);

/// Expected value of min(U(0, m), clip): m/2 below the clip, else the exact
/// truncated-uniform mean clip - clip^2/(2m).
double clipped_uniform_mean(double m, double clip);

class SyntheticClassicalEnv final : public ClassicalEnv {
public:
    static constexpr double kClip = 1.0 - 1e-9;

    SyntheticClassicalEnv(ClusterMap map, std::vector<double> cluster_lambdas,
                          std::vector<double> arm_alphas);

    std::unique_ptr<ClassicalEnv> clone() const override {
        return std::make_unique<SyntheticClassicalEnv>(*this);
    }
    int num_arms() const override { return map_.num_arms(); }
    const ClusterMap& clusters() const override { return map_; }
    double draw(ArmId arm, RngStream& rng) override;
    double mean(ArmId arm) const override { return means_.at(static_cast<std::size_t>(arm)); }
    std::pair<double, double> reward_range() const override { return {0.0, 1.0}; }
    void describe(nlohmann::json& out) const override;

    const std::vector<double>& cluster_lambdas() const { return lambdas_; }
    const std::vector<double>& arm_alphas() const { return alphas_; }
    double clip_rate() const {
        return draws_ == 0 ? 0.0 : static_cast<double>(clipped_) / static_cast<double>(draws_);
    }

private:
    ClusterMap map_;
    std::vector<double> lambdas_;
    std::vector<double> alphas_;
    std::vector<double> upper_;  // 2 alpha_k lambda(c(k)), pre-clip support bound
    std::vector<double> means_;  // post-clip expected rewards
    std::uint64_t draws_ = 0;
    std::uint64_t clipped_ = 0;
};

/// Sample the paper-style instance: random permutation split of arms into
/// near-equal clusters, lambda(i) centroids, per-arm alpha scales.
SyntheticClassicalEnv gen_classical(const SyntheticClassicalSpec& spec, RngStream& rng);

/// Historical records per arm: round(fraction*K) uniformly chosen arms each
/// receive Poisson(mean) draws from their own reward distribution.
std::vector<std::vector<double>> gen_history_classical(SyntheticClassicalEnv& env, double fraction,
                                                       double mean, RngStream& rng);

// ---------------------------------------------------------------------------
// Synthetic contextual bandit
// ---------------------------------------------------------------------------

struct SyntheticContextualSpec {
    int num_clusters = 10;
    int num_arms = 100;
    int dim = 5;
    double epsilon = 0.1;       // cluster radius scale
    double history_mean = 10.0;  // Poisson parameter for per-arm history size
};

class SyntheticContextualEnv final : public ContextualEnv {
public:
    SyntheticContextualEnv(ClusterMap map, std::vector<Eigen::VectorXd> centroids,
                           std::vector<Eigen::VectorXd> thetas);

    std::unique_ptr<ContextualEnv> clone() const override {
        return std::make_unique<SyntheticContextualEnv>(*this);
    }
    int num_arms() const override { return map_.num_arms(); }
    int dim() const override { return static_cast<int>(thetas_.front().size()); }
    const ClusterMap& clusters() const override { return map_; }
    bool next_context(Eigen::VectorXd& x, RngStream& rng) override;
    double draw(ArmId arm, const Eigen::VectorXd& x, RngStream& rng) override;
    double expected(ArmId arm, const Eigen::VectorXd& x) const override {
        return thetas_.at(static_cast<std::size_t>(arm)).dot(x);
    }
    std::pair<double, double> reward_range() const override { return range_; }
    void describe(nlohmann::json& out) const override;

    const std::vector<Eigen::VectorXd>& centroids() const { return centroids_; }
    const std::vector<Eigen::VectorXd>& thetas() const { return thetas_; }

private:
    ClusterMap map_;
    std::vector<Eigen::VectorXd> centroids_;
    std::vector<Eigen::VectorXd> thetas_;
    std::pair<double, double> range_;
};

SyntheticContextualEnv gen_contextual(const SyntheticContextualSpec& spec, RngStream& rng);

struct ContextualHistory {
    std::vector<HistorySeed> arm_seeds;
    std::vector<HistorySeed> cluster_seeds;  // member contributions over one shared identity
    std::uint64_t total_records = 0;
};

/// Per arm, Poisson(history_mean) historical (context, reward) pairs folded
/// into seeds; rewards follow the environment's own law.
ContextualHistory gen_history_contextual(const SyntheticContextualSpec& spec,
                                         const SyntheticContextualEnv& env, RngStream& rng);

}  // namespace hcb
