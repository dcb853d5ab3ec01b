#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcb {

using ArmId = int;
using ClusterId = int;

enum class Phase { historical, online };

/// Reward tallies for one arm (or one cluster aggregate), with historical
/// and online phases kept separate. Sums, not running means, are stored so
/// pooling over a cluster stays exact and associative.
struct ArmStats {
    std::uint64_t hist_count = 0;
    double hist_sum = 0.0;
    std::uint64_t online_count = 0;
    double online_sum = 0.0;

    void record(double reward, Phase phase) {
        if (!std::isfinite(reward)) {
            throw std::invalid_argument("ArmStats::record: non-finite reward");
        }
        if (phase == Phase::historical) {
            ++hist_count;
            hist_sum += reward;
        } else {
            ++online_count;
            online_sum += reward;
        }
    }

    std::uint64_t total_count() const { return hist_count + online_count; }

    /// Pooled mean over history + online plays; empty when nothing recorded
    /// (never silently zero — unobserved arms are a distinct state).
    std::optional<double> pooled_mean() const {
        const auto n = total_count();
        if (n == 0) return std::nullopt;
        return (hist_sum + online_sum) / static_cast<double>(n);
    }

    ArmStats& operator+=(const ArmStats& o) {
        hist_count += o.hist_count;
        hist_sum += o.hist_sum;
        online_count += o.online_count;
        online_sum += o.online_sum;
        return *this;
    }

    friend bool operator==(const ArmStats&, const ArmStats&) = default;
};

/// Fixed assignment of arms to clusters. Total: every arm belongs to exactly
/// one cluster and every cluster id in [0, num_clusters) is non-empty.
class ClusterMap {
public:
    ClusterMap(std::vector<ClusterId> assignment, int num_clusters)
        : assignment_(std::move(assignment)), members_(static_cast<std::size_t>(num_clusters)) {
        if (num_clusters <= 0) throw std::invalid_argument("ClusterMap: num_clusters must be positive");
        if (assignment_.empty()) throw std::invalid_argument("ClusterMap: no arms");
        for (std::size_t k = 0; k < assignment_.size(); ++k) {
            const ClusterId c = assignment_[k];
            if (c < 0 || c >= num_clusters) {
                throw std::invalid_argument("ClusterMap: arm " + std::to_string(k) +
                                            " assigned to invalid cluster " + std::to_string(c));
            }
            members_[static_cast<std::size_t>(c)].push_back(static_cast<ArmId>(k));
        }
        for (int c = 0; c < num_clusters; ++c) {
            if (members_[static_cast<std::size_t>(c)].empty()) {
                throw std::invalid_argument("ClusterMap: cluster " + std::to_string(c) + " is empty");
            }
        }
    }

    static ClusterMap single(int num_arms) {
        return ClusterMap(std::vector<ClusterId>(static_cast<std::size_t>(num_arms), 0), 1);
    }

    /// Arms [0..n) split into equal contiguous blocks (arm k -> k / block).
    static ClusterMap contiguous_blocks(int num_arms, int num_clusters) {
        if (num_clusters <= 0 || num_arms < num_clusters) {
            throw std::invalid_argument("ClusterMap::contiguous_blocks: need num_arms >= num_clusters > 0");
        }
        std::vector<ClusterId> a(static_cast<std::size_t>(num_arms));
        for (int k = 0; k < num_arms; ++k) {
            a[static_cast<std::size_t>(k)] =
                std::min(num_clusters - 1, k / ((num_arms + num_clusters - 1) / num_clusters));
        }
        return ClusterMap(std::move(a), num_clusters);
    }

    ClusterId cluster_of(ArmId arm) const { return assignment_.at(static_cast<std::size_t>(arm)); }
    int num_arms() const { return static_cast<int>(assignment_.size()); }
    int num_clusters() const { return static_cast<int>(members_.size()); }

    const std::vector<ArmId>& members(ClusterId cluster) const {
        if (cluster < 0 || cluster >= num_clusters()) {
            throw std::invalid_argument("ClusterMap::members: unknown cluster " + std::to_string(cluster));
        }
        return members_[static_cast<std::size_t>(cluster)];
    }

    const std::vector<ClusterId>& assignment() const { return assignment_; }

private:
    std::vector<ClusterId> assignment_;
    std::vector<std::vector<ArmId>> members_;
};

/// Componentwise sum of the member arms' tallies; hist_count is the cluster's
/// H_i^c and online_count its n_i^c(t).
inline ArmStats cluster_stats(const ClusterMap& map, std::span<const ArmStats> per_arm,
                              ClusterId cluster) {
    if (per_arm.size() != static_cast<std::size_t>(map.num_arms())) {
        throw std::invalid_argument("cluster_stats: per_arm size does not match map");
    }
    ArmStats out;
    for (ArmId k : map.members(cluster)) {
        out += per_arm[static_cast<std::size_t>(k)];
    }
    return out;
}

}  // namespace hcb
