#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hcb/arm_stats.hpp"
#include "hcb/ridge.hpp"

namespace hcb {

enum class ContextualKind { linucb, hlinucb, linucbc, hlinucbc };

constexpr const char* to_string(ContextualKind k) {
    switch (k) {
        case ContextualKind::linucb: return "linucb";
        case ContextualKind::hlinucb: return "hlinucb";
        case ContextualKind::linucbc: return "linucbc";
        case ContextualKind::hlinucbc: return "hlinucbc";
    }
    return "?";
}

constexpr bool uses_clusters(ContextualKind k) {
    return k == ContextualKind::linucbc || k == ContextualKind::hlinucbc;
}
constexpr bool uses_history(ContextualKind k) {
    return k == ContextualKind::hlinucb || k == ContextualKind::hlinucbc;
}

/// Ridge-regression contextual policies over pre-clustered arms.
///
///   linucb    flat, identity initialization
///   hlinucb   flat, arm states seeded from history
///   linucbc   two-level, identity initialization at both levels
///   hlinucbc  two-level, history seeds at both levels
///
/// Clustered kinds pick the cluster with the highest cluster-level score,
/// then the best arm within it; each online step rank-one-updates the played
/// arm and, for clustered kinds, its cluster. Ties break to the lowest id.
class ContextualPolicy {
public:
    /// History-free construction (linucb / linucbc).
    ContextualPolicy(ContextualKind kind, ClusterMap map, int d, double alpha)
        : ContextualPolicy(kind, std::move(map), d, alpha, {}, {}) {}

    /// Seeded construction. Arm/cluster seeds are ignored by the kinds that
    /// do not use them, matching their definitions as degenerate baselines.
    ContextualPolicy(ContextualKind kind, ClusterMap map, int d, double alpha,
                     const std::vector<HistorySeed>& arm_seeds,
                     const std::vector<HistorySeed>& cluster_seeds)
        : kind_(kind), map_(std::move(map)), d_(d), alpha_(alpha) {
        if (!(alpha > 0.0)) throw std::invalid_argument("ContextualPolicy: alpha must be > 0");
        if (d <= 0) throw std::invalid_argument("ContextualPolicy: dimension must be positive");
        const bool seed_arms = uses_history(kind_);
        if (seed_arms && arm_seeds.size() != static_cast<std::size_t>(map_.num_arms())) {
            throw std::invalid_argument("ContextualPolicy: need one seed per arm");
        }
        arms_.reserve(static_cast<std::size_t>(map_.num_arms()));
        for (int k = 0; k < map_.num_arms(); ++k) {
            arms_.push_back(seed_arms ? RidgeState(arm_seeds[static_cast<std::size_t>(k)])
                                      : RidgeState(d_));
        }
        if (uses_clusters(kind_)) {
            const bool seed_clusters = uses_history(kind_);
            if (seed_clusters && cluster_seeds.size() != static_cast<std::size_t>(map_.num_clusters())) {
                throw std::invalid_argument("ContextualPolicy: need one seed per cluster");
            }
            clusters_.reserve(static_cast<std::size_t>(map_.num_clusters()));
            for (int c = 0; c < map_.num_clusters(); ++c) {
                clusters_.push_back(seed_clusters
                                        ? RidgeState(cluster_seeds[static_cast<std::size_t>(c)])
                                        : RidgeState(d_));
            }
        }
        for (const auto& s : arms_) check_dim(s);
        for (const auto& s : clusters_) check_dim(s);
    }

    ContextualKind kind() const { return kind_; }
    const ClusterMap& map() const { return map_; }
    int dim() const { return d_; }
    double alpha() const { return alpha_; }
    const RidgeState& arm(ArmId k) const { return arms_.at(static_cast<std::size_t>(k)); }
    const RidgeState& cluster(ClusterId c) const { return clusters_.at(static_cast<std::size_t>(c)); }

    ArmId select(const Eigen::VectorXd& x) const {
        if (!x.allFinite()) throw std::invalid_argument("ContextualPolicy::select: non-finite context");
        if (!uses_clusters(kind_)) {
            ArmId best = 0;
            double best_score = arms_[0].score(x, alpha_);
            for (ArmId k = 1; k < map_.num_arms(); ++k) {
                if (const double s = arms_[static_cast<std::size_t>(k)].score(x, alpha_); s > best_score) {
                    best = k;
                    best_score = s;
                }
            }
            return best;
        }
        ClusterId best_cluster = 0;
        double best_cscore = clusters_[0].score(x, alpha_);
        for (ClusterId c = 1; c < map_.num_clusters(); ++c) {
            if (const double s = clusters_[static_cast<std::size_t>(c)].score(x, alpha_); s > best_cscore) {
                best_cluster = c;
                best_cscore = s;
            }
        }
        const auto& members = map_.members(best_cluster);
        ArmId best = members.front();
        double best_score = arms_[static_cast<std::size_t>(best)].score(x, alpha_);
        for (std::size_t i = 1; i < members.size(); ++i) {
            const ArmId k = members[i];
            if (const double s = arms_[static_cast<std::size_t>(k)].score(x, alpha_); s > best_score) {
                best = k;
                best_score = s;
            }
        }
        return best;
    }

    void update(ArmId arm, const Eigen::VectorXd& x, double reward) {
        if (arm < 0 || arm >= map_.num_arms()) {
            throw std::invalid_argument("ContextualPolicy::update: arm " + std::to_string(arm) +
                                        " out of range");
        }
        arms_[static_cast<std::size_t>(arm)].rank_one_update(x, reward);
        if (uses_clusters(kind_)) {
            clusters_[static_cast<std::size_t>(map_.cluster_of(arm))].rank_one_update(x, reward);
        }
    }

private:
    void check_dim(const RidgeState& s) const {
        if (s.dim() != d_) throw std::invalid_argument("ContextualPolicy: mixed dimensions");
    }

    ContextualKind kind_;
    ClusterMap map_;
    int d_;
    double alpha_;
    std::vector<RidgeState> arms_;
    std::vector<RidgeState> clusters_;
};

}  // namespace hcb
