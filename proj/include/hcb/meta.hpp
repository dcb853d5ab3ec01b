#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "hcb/arm_stats.hpp"
#include "hcb/classical.hpp"

namespace hcb {

/// UCB chooser over two complete bandit algorithms: sub-policy A (clustering
/// plus history) and sub-policy B (history only). Each round the meta level
/// picks a sub-policy by the history-free UCB index over rewards normalized
/// to [0,1]; only the played sub-policy's internal state advances, so the
/// two candidates evolve exactly as they would if run alone on their rounds.
/// Sharing observations with the idle sub-policy is available behind an
/// off-by-default flag.
template <class Sub>
class MetaPolicy {
public:
    struct Choice {
        int sub;  // 0 = A (with clustering), 1 = B (without)
        ArmId arm;
    };

    MetaPolicy(Sub with_clustering, Sub history_only, double reward_lo, double reward_hi,
               bool share_observations = false)
        : sub_a_(std::move(with_clustering)),
          sub_b_(std::move(history_only)),
          lo_(reward_lo),
          hi_(reward_hi),
          share_observations_(share_observations) {
        if (!(hi_ > lo_)) throw std::invalid_argument("MetaPolicy: empty reward range");
    }

    template <class... Ctx>
    Choice select(const Ctx&... ctx) const {
        const std::uint64_t t = t_ + 1;
        const double idx_a = ucb_index(meta_[0], t);
        const double idx_b = ucb_index(meta_[1], t);
        const int sub = idx_b > idx_a ? 1 : 0;
        return Choice{sub, sub == 0 ? sub_a_.select(ctx...) : sub_b_.select(ctx...)};
    }

    /// Record the round: `sub` must be the sub-policy chosen this round and
    /// `reward` the raw environment reward (normalized only at the meta level).
    template <class... Ctx>
    void update(int sub, ArmId arm, double reward, const Ctx&... ctx) {
        if (sub != 0 && sub != 1) throw std::invalid_argument("MetaPolicy::update: bad sub-policy id");
        double norm = (reward - lo_) / (hi_ - lo_);
        if (norm < 0.0 || norm > 1.0) {
            ++clamp_count_;
            norm = std::clamp(norm, 0.0, 1.0);
        }
        meta_[static_cast<std::size_t>(sub)].record(norm, Phase::online);
        if (share_observations_) {
            sub_a_.update(arm, ctx..., reward);
            sub_b_.update(arm, ctx..., reward);
        } else if (sub == 0) {
            sub_a_.update(arm, ctx..., reward);
        } else {
            sub_b_.update(arm, ctx..., reward);
        }
        ++t_;
    }

    std::uint64_t rounds() const { return t_; }
    const ArmStats& meta_stats(int sub) const { return meta_[static_cast<std::size_t>(sub)]; }
    const Sub& sub_a() const { return sub_a_; }
    const Sub& sub_b() const { return sub_b_; }
    /// Rounds where a reward fell outside the declared range and was clamped.
    std::uint64_t clamp_count() const { return clamp_count_; }

private:
    Sub sub_a_;
    Sub sub_b_;
    ArmStats meta_[2];
    std::uint64_t t_ = 0;
    double lo_;
    double hi_;
    bool share_observations_;
    std::uint64_t clamp_count_ = 0;
};

}  // namespace hcb
