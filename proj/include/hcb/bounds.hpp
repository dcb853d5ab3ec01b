#pragma once

#include <cstdint>
#include <vector>

namespace hcb::bounds {

/// Expected-plays bound for a suboptimal arm under the history-aware UCB
/// index: 1 + max(0, 8 ln(T+H_k)/gap^2 - H_k) + pi^2(1+6H_k)/(6(2H_k+1)^2)
/// + the same tail term for the best arm's history H_k*.
double hucb_plays_bound(double T, double gap, double hist_k, double hist_kstar);

/// One suboptimal cluster's contribution data under tight clustering.
struct TightClusterTerm {
    double delta;        // l_{i*} - u_i, the inter-interval gap
    double hist;         // H_i^c
};

/// One suboptimal arm inside the optimal cluster.
struct GapArmTerm {
    double gap;          // Delta_k
    double hist;         // H_k
};

struct TightBoundInputs {
    double T = 0;
    std::vector<TightClusterTerm> suboptimal_clusters;
    double optimal_cluster_hist = 0;            // H_{i*}^c
    std::vector<GapArmTerm> optimal_cluster_arms;  // suboptimal arms of i* only
    double best_arm_hist = 0;                   // H_{k*}
};

/// Tight-clustering regret bound: cluster terms (delta_i, H_i^c) plus the
/// per-arm terms over the optimal cluster's suboptimal arms.
double hucbc_tight_regret_bound(const TightBoundInputs& in);

struct PrimeBoundInputs {
    double T = 0;
    double r = 0;  // drift-condition constants; no defaults exist, callers
    double s = 0;  // must supply values appropriate to their analysis
    std::vector<std::vector<double>> suboptimal_cluster_gaps;  // Delta_k per arm, per cluster
    std::vector<GapArmTerm> optimal_cluster_arms;
    double best_arm_hist = 0;
};

/// Adversarial-clustering bound for the UCB-between-clusters variant:
/// sum over suboptimal clusters of max_k (16 r ln T/(Delta_k/2)^2 + 2s + pi/3)
/// plus the per-arm terms over the optimal cluster.
double hucbc_prime_regret_bound(const PrimeBoundInputs& in);

/// Contextual regret bound from log-determinants:
/// sigma (sqrt(d ln(det(A_T)^{1/2}/(delta det(H)^{1/2}))) + ||theta*||/sqrt(phi))
///   * sqrt(8 T ln(det(A_T)/det(H))).
double hlinucb_regret_bound(double T, int d, double sigma, double delta, double phi,
                            double theta_norm, double log_det_at, double log_det_h);

/// Same bound from raw determinants.
double hlinucb_regret_bound_from_dets(double T, int d, double sigma, double delta, double phi,
                                      double theta_norm, double det_at, double det_h);

}  // namespace hcb::bounds
