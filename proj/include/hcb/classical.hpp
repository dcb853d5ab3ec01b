#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcb/arm_stats.hpp"

namespace hcb {

enum class ClassicalKind { ucb, hucb, ucbc, hucbc, hucbc_prime };

constexpr const char* to_string(ClassicalKind k) {
    switch (k) {
        case ClassicalKind::ucb: return "ucb";
        case ClassicalKind::hucb: return "hucb";
        case ClassicalKind::ucbc: return "ucbc";
        case ClassicalKind::hucbc: return "hucbc";
        case ClassicalKind::hucbc_prime: return "hucbc-prime";
    }
    return "?";
}

/// Index value for one arm or cluster; +inf marks an entry that has never
/// been observed and must be initialized by a forced play.
struct IndexValue {
    int id = -1;
    double value = -std::numeric_limits<double>::infinity();
};

/// History-aware optimistic index: pooled mean plus
/// sqrt(2 ln(t + H) / (n + H)). Applies unchanged to cluster aggregates,
/// where the counts are the per-cluster analogues H_i^c and n_i^c(t).
inline double hucb_index(const ArmStats& stats, std::uint64_t t) {
    if (t < 1) throw std::invalid_argument("hucb_index: t must be >= 1");
    const auto mean = stats.pooled_mean();
    if (!mean) return std::numeric_limits<double>::infinity();
    const double h = static_cast<double>(stats.hist_count);
    const double n = static_cast<double>(stats.online_count);
    return *mean + std::sqrt(2.0 * std::log(static_cast<double>(t) + h) / (n + h));
}

/// Same index with all history ignored (classic UCB on the online tallies).
inline double ucb_index(const ArmStats& stats, std::uint64_t t) {
    if (t < 1) throw std::invalid_argument("ucb_index: t must be >= 1");
    if (stats.online_count == 0) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(stats.online_count);
    return stats.online_sum / n + std::sqrt(2.0 * std::log(static_cast<double>(t)) / n);
}

/// Index-based classical policies over pre-clustered arms.
///
///   ucb          flat, online data only
///   hucb         flat, history pooled into means and bonuses
///   ucbc         two-level, online data only at both levels
///   hucbc        two-level, history at both levels
///   hucbc-prime  two-level, online-only at the cluster level, history within
///
/// Entries with no observations carry a +inf index, so initialization is a
/// forced play rather than a warm-up loop. Ties break to the lowest id.
class ClassicalPolicy {
public:
    ClassicalPolicy(ClassicalKind kind, ClusterMap map)
        : kind_(kind),
          map_(std::move(map)),
          arms_(static_cast<std::size_t>(map_.num_arms())),
          clusters_(static_cast<std::size_t>(map_.num_clusters())) {}

    ClassicalKind kind() const { return kind_; }
    const ClusterMap& map() const { return map_; }
    std::uint64_t rounds() const { return t_; }
    const ArmStats& arm(ArmId k) const { return arms_.at(static_cast<std::size_t>(k)); }
    const ArmStats& cluster(ClusterId c) const { return clusters_.at(static_cast<std::size_t>(c)); }

    /// Seed one historical observation. Must precede the online phase.
    void record_history(ArmId arm, double reward) {
        if (t_ > 0) throw std::logic_error("ClassicalPolicy: history after online play");
        check_arm(arm);
        arms_[static_cast<std::size_t>(arm)].record(reward, Phase::historical);
        clusters_[static_cast<std::size_t>(map_.cluster_of(arm))].record(reward, Phase::historical);
    }

    ArmId select() const {
        const std::uint64_t t = t_ + 1;
        if (kind_ == ClassicalKind::ucb || kind_ == ClassicalKind::hucb) {
            IndexValue best;
            for (ArmId k = 0; k < map_.num_arms(); ++k) {
                consider(best, k, arm_index(k, t));
            }
            return best.id;
        }
        IndexValue best_cluster;
        for (ClusterId c = 0; c < map_.num_clusters(); ++c) {
            consider(best_cluster, c, cluster_index(c, t));
        }
        IndexValue best;
        for (ArmId k : map_.members(best_cluster.id)) {
            consider(best, k, arm_index(k, t));
        }
        return best.id;
    }

    void update(ArmId arm, double reward) {
        check_arm(arm);
        arms_[static_cast<std::size_t>(arm)].record(reward, Phase::online);
        clusters_[static_cast<std::size_t>(map_.cluster_of(arm))].record(reward, Phase::online);
        ++t_;
    }

    /// Cluster-level index as used by select() at round t.
    double cluster_index(ClusterId c, std::uint64_t t) const {
        const ArmStats& s = clusters_.at(static_cast<std::size_t>(c));
        // ucbc and hucbc-prime play plain UCB between clusters.
        return kind_ == ClassicalKind::hucbc ? hucb_index(s, t) : ucb_index(s, t);
    }

    /// Arm-level index as used by select() at round t.
    double arm_index(ArmId k, std::uint64_t t) const {
        const ArmStats& s = arms_.at(static_cast<std::size_t>(k));
        const bool with_history = kind_ == ClassicalKind::hucb || kind_ == ClassicalKind::hucbc ||
                                  kind_ == ClassicalKind::hucbc_prime;
        return with_history ? hucb_index(s, t) : ucb_index(s, t);
    }

private:
    static void consider(IndexValue& best, int id, double value) {
        if (value > best.value) best = IndexValue{id, value};
    }

    void check_arm(ArmId arm) const {
        if (arm < 0 || arm >= map_.num_arms()) {
            throw std::invalid_argument("ClassicalPolicy: arm " + std::to_string(arm) + " out of range");
        }
    }

    ClassicalKind kind_;
    ClusterMap map_;
    std::vector<ArmStats> arms_;
    std::vector<ArmStats> clusters_;
    std::uint64_t t_ = 0;
};

}  // namespace hcb
