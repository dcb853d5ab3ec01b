#include "hcb/environments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hcb {

double lambda_centroid(double u, int one_based_cluster) {
    if (one_based_cluster < 1) throw std::invalid_argument("lambda_centroid: cluster index is 1-based");
    return 0.5 * (u + 1.0 / static_cast<double>(one_based_cluster));
}

double clipped_uniform_mean(double m, double clip) {
    if (!(m > 0.0)) throw std::invalid_argument("clipped_uniform_mean: m must be positive");
    if (m <= clip) return 0.5 * m;
    return clip - clip * clip / (2.0 * m);
}

// ---------------------------------------------------------------------------
// SyntheticClassicalEnv
// ---------------------------------------------------------------------------

SyntheticClassicalEnv::SyntheticClassicalEnv(ClusterMap map, std::vector<double> cluster_lambdas,
                                             std::vector<double> arm_alphas)
    : map_(std::move(map)), lambdas_(std::move(cluster_lambdas)), alphas_(std::move(arm_alphas)) {
    if (lambdas_.size() != static_cast<std::size_t>(map_.num_clusters()) ||
        alphas_.size() != static_cast<std::size_t>(map_.num_arms())) {
        throw std::invalid_argument("SyntheticClassicalEnv: size mismatch");
    }
    upper_.resize(alphas_.size());
    means_.resize(alphas_.size());
    for (ArmId k = 0; k < map_.num_arms(); ++k) {
        const auto ku = static_cast<std::size_t>(k);
        upper_[ku] = 2.0 * alphas_[ku] * lambdas_[static_cast<std::size_t>(map_.cluster_of(k))];
        if (!(upper_[ku] > 0.0)) {
            throw std::invalid_argument("SyntheticClassicalEnv: nonpositive reward support");
        }
        means_[ku] = clipped_uniform_mean(upper_[ku], kClip);
    }
}

double SyntheticClassicalEnv::draw(ArmId arm, RngStream& rng) {
    const double raw = rng.uniform(0.0, upper_.at(static_cast<std::size_t>(arm)));
    ++draws_;
    if (raw > kClip) {
        ++clipped_;
        return kClip;
    }
    return raw;
}

void SyntheticClassicalEnv::describe(nlohmann::json& out) const {
    out["kind"] = "synthetic-classical";
    out["num_arms"] = map_.num_arms();
    out["num_clusters"] = map_.num_clusters();
    out["cluster_lambdas"] = lambdas_;
    out["arm_alphas"] = alphas_;
    out["assignment"] = map_.assignment();
    out["best_arm"] = best_arm();
    out["best_mean"] = best_mean();
    out["clip_rate"] = clip_rate();
}

SyntheticClassicalEnv gen_classical(const SyntheticClassicalSpec& spec, RngStream& rng) {
    if (spec.num_clusters <= 0 || spec.num_arms < spec.num_clusters) {
        throw std::invalid_argument("gen_classical: need num_arms >= num_clusters > 0");
    }
    std::vector<double> lambdas(static_cast<std::size_t>(spec.num_clusters));
    for (int i = 0; i < spec.num_clusters; ++i) {
        lambdas[static_cast<std::size_t>(i)] = lambda_centroid(rng.next_double(), i + 1);
    }
    // Random permutation split into near-equal clusters.
    std::vector<ArmId> order(static_cast<std::size_t>(spec.num_arms));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<ClusterId> assignment(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        assignment[static_cast<std::size_t>(order[pos])] =
            static_cast<ClusterId>(pos % static_cast<std::size_t>(spec.num_clusters));
    }
    std::vector<double> alphas(static_cast<std::size_t>(spec.num_arms));
    for (auto& a : alphas) a = rng.uniform(spec.alpha_lo, spec.alpha_hi);
    return SyntheticClassicalEnv(ClusterMap(std::move(assignment), spec.num_clusters),
                                 std::move(lambdas), std::move(alphas));
}

std::vector<std::vector<double>> gen_history_classical(SyntheticClassicalEnv& env, double fraction,
                                                       double mean, RngStream& rng) {
    if (fraction < 0.0 || fraction > 1.0) {
        throw std::invalid_argument("gen_history_classical: fraction must be in [0,1]");
    }
    const int num_arms = env.num_arms();
    std::vector<std::vector<double>> history(static_cast<std::size_t>(num_arms));
    const auto chosen = static_cast<std::size_t>(std::llround(fraction * num_arms));
    std::vector<ArmId> order(static_cast<std::size_t>(num_arms));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (std::size_t i = 0; i < chosen; ++i) {
        const ArmId arm = order[i];
        const std::uint64_t plays = rng.poisson(mean);
        auto& rewards = history[static_cast<std::size_t>(arm)];
        rewards.reserve(plays);
        for (std::uint64_t p = 0; p < plays; ++p) rewards.push_back(env.draw(arm, rng));
    }
    return history;
}

// ---------------------------------------------------------------------------
// SyntheticContextualEnv
// ---------------------------------------------------------------------------

SyntheticContextualEnv::SyntheticContextualEnv(ClusterMap map, std::vector<Eigen::VectorXd> centroids,
                                               std::vector<Eigen::VectorXd> thetas)
    : map_(std::move(map)), centroids_(std::move(centroids)), thetas_(std::move(thetas)) {
    if (centroids_.size() != static_cast<std::size_t>(map_.num_clusters()) ||
        thetas_.size() != static_cast<std::size_t>(map_.num_arms()) || thetas_.empty()) {
        throw std::invalid_argument("SyntheticContextualEnv: size mismatch");
    }
    double max_norm = 0.0;
    for (const auto& th : thetas_) {
        if (th.size() != thetas_.front().size()) {
            throw std::invalid_argument("SyntheticContextualEnv: mixed dimensions");
        }
        max_norm = std::max(max_norm, th.norm());
    }
    // Declared range for meta normalization: |2 theta^T x| stays within
    // 8 ||theta|| except for far Gaussian tails (clamped with a warning).
    const double span = 8.0 * std::max(1.0, max_norm);
    range_ = {-span, span};
}

bool SyntheticContextualEnv::next_context(Eigen::VectorXd& x, RngStream& rng) {
    x.resize(dim());
    for (int i = 0; i < dim(); ++i) x[i] = rng.normal();
    return true;
}

double SyntheticContextualEnv::draw(ArmId arm, const Eigen::VectorXd& x, RngStream& rng) {
    const double edge = 2.0 * expected(arm, x);
    return rng.uniform(std::min(0.0, edge), std::max(0.0, edge));
}

void SyntheticContextualEnv::describe(nlohmann::json& out) const {
    out["kind"] = "synthetic-contextual";
    out["num_arms"] = map_.num_arms();
    out["num_clusters"] = map_.num_clusters();
    out["dim"] = dim();
    auto centroid_rows = nlohmann::json::array();
    for (const auto& c : centroids_) {
        centroid_rows.push_back(std::vector<double>(c.data(), c.data() + c.size()));
    }
    out["cluster_centroids"] = std::move(centroid_rows);
    out["assignment"] = map_.assignment();
}

SyntheticContextualEnv gen_contextual(const SyntheticContextualSpec& spec, RngStream& rng) {
    if (spec.num_clusters <= 0 || spec.num_arms < spec.num_clusters || spec.dim <= 0) {
        throw std::invalid_argument("gen_contextual: bad spec");
    }
    std::vector<Eigen::VectorXd> centroids(static_cast<std::size_t>(spec.num_clusters));
    for (auto& c : centroids) {
        c.resize(spec.dim);
        for (int i = 0; i < spec.dim; ++i) c[i] = rng.normal();
    }
    std::vector<ArmId> order(static_cast<std::size_t>(spec.num_arms));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    std::vector<ClusterId> assignment(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        assignment[static_cast<std::size_t>(order[pos])] =
            static_cast<ClusterId>(pos % static_cast<std::size_t>(spec.num_clusters));
    }
    ClusterMap map(std::move(assignment), spec.num_clusters);
    std::vector<Eigen::VectorXd> thetas(static_cast<std::size_t>(spec.num_arms));
    for (ArmId k = 0; k < spec.num_arms; ++k) {
        Eigen::VectorXd nu(spec.dim);
        for (int i = 0; i < spec.dim; ++i) nu[i] = rng.normal();
        thetas[static_cast<std::size_t>(k)] =
            centroids[static_cast<std::size_t>(map.cluster_of(k))] + spec.epsilon * nu;
    }
    return SyntheticContextualEnv(std::move(map), std::move(centroids), std::move(thetas));
}

ContextualHistory gen_history_contextual(const SyntheticContextualSpec& spec,
                                         const SyntheticContextualEnv& env, RngStream& rng) {
    const int d = env.dim();
    ContextualHistory out;
    out.arm_seeds.assign(static_cast<std::size_t>(env.num_arms()), HistorySeed::empty(d));
    out.cluster_seeds.assign(static_cast<std::size_t>(env.clusters().num_clusters()),
                             HistorySeed::empty(d));
    Eigen::VectorXd x(d);
    for (ArmId k = 0; k < env.num_arms(); ++k) {
        const std::uint64_t plays = rng.poisson(spec.history_mean);
        const auto c = static_cast<std::size_t>(env.clusters().cluster_of(k));
        for (std::uint64_t p = 0; p < plays; ++p) {
            for (int i = 0; i < d; ++i) x[i] = rng.normal();
            const double edge = 2.0 * env.expected(k, x);
            const double r = rng.uniform(std::min(0.0, edge), std::max(0.0, edge));
            out.arm_seeds[static_cast<std::size_t>(k)].add(x, r);
            out.cluster_seeds[c].add(x, r);
            ++out.total_records;
        }
    }
    return out;
}

}  // namespace hcb
