#include "hcb/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hcb::bounds {

namespace {

constexpr double kPi = std::numbers::pi;

// pi^2 (1 + 6H) / (6 (2H + 1)^2), the summed tail of 2/(t+H)^2.
double tail_term(double hist) {
    const double w = 2.0 * hist + 1.0;
    return kPi * kPi * (1.0 + 6.0 * hist) / (6.0 * w * w);
}

double ell(double T, double gap, double hist) {
    return std::max(0.0, 8.0 * std::log(T + hist) / (gap * gap) - hist);
}

void check_gap(double gap) {
    if (!(gap > 0.0)) throw std::invalid_argument("bounds: gap must be positive");
}

}  // namespace

double hucb_plays_bound(double T, double gap, double hist_k, double hist_kstar) {
    check_gap(gap);
    if (!(T >= 1.0)) throw std::invalid_argument("bounds: T must be >= 1");
    if (hist_k < 0.0 || hist_kstar < 0.0) throw std::invalid_argument("bounds: negative history");
    return 1.0 + ell(T, gap, hist_k) + tail_term(hist_k) + tail_term(hist_kstar);
}

double hucbc_tight_regret_bound(const TightBoundInputs& in) {
    if (!(in.T >= 1.0)) throw std::invalid_argument("bounds: T must be >= 1");
    double total = 0.0;
    for (const auto& c : in.suboptimal_clusters) {
        check_gap(c.delta);
        total += 1.0 + ell(in.T, c.delta, c.hist) + tail_term(c.hist) + tail_term(in.optimal_cluster_hist);
    }
    for (const auto& k : in.optimal_cluster_arms) {
        check_gap(k.gap);
        total += 1.0 + ell(in.T, k.gap, k.hist) + tail_term(k.hist) + tail_term(in.best_arm_hist);
    }
    return total;
}

double hucbc_prime_regret_bound(const PrimeBoundInputs& in) {
    if (!(in.T >= 1.0)) throw std::invalid_argument("bounds: T must be >= 1");
    if (!(in.r > 0.0) || !(in.s > 0.0)) {
        throw std::invalid_argument("bounds: drift constants r and s are required");
    }
    double total = 0.0;
    for (const auto& gaps : in.suboptimal_cluster_gaps) {
        if (gaps.empty()) throw std::invalid_argument("bounds: cluster without arm gaps");
        double worst = 0.0;
        for (double gap : gaps) {
            check_gap(gap);
            const double half = gap / 2.0;
            worst = std::max(worst, 16.0 * in.r * std::log(in.T) / (half * half) + 2.0 * in.s + kPi / 3.0);
        }
        total += worst;
    }
    for (const auto& k : in.optimal_cluster_arms) {
        check_gap(k.gap);
        total += 1.0 + ell(in.T, k.gap, k.hist) + tail_term(k.hist) + tail_term(in.best_arm_hist);
    }
    return total;
}

double hlinucb_regret_bound(double T, int d, double sigma, double delta, double phi,
                            double theta_norm, double log_det_at, double log_det_h) {
    if (!(T >= 1.0)) throw std::invalid_argument("bounds: T must be >= 1");
    if (d <= 0) throw std::invalid_argument("bounds: d must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bounds: delta must be in (0,1)");
    if (!(sigma > 0.0) || !(phi > 0.0)) throw std::invalid_argument("bounds: sigma, phi must be positive");
    if (log_det_h < -1e-12 || log_det_at < log_det_h - 1e-12) {
        throw std::invalid_argument("bounds: need det(A_T) >= det(H) >= 1");
    }
    const double ratio = std::max(0.0, log_det_at - log_det_h);
    const double conf = std::sqrt(static_cast<double>(d) * (0.5 * ratio - std::log(delta)));
    return sigma * (conf + theta_norm / std::sqrt(phi)) * std::sqrt(8.0 * T * ratio);
}

double hlinucb_regret_bound_from_dets(double T, int d, double sigma, double delta, double phi,
                                      double theta_norm, double det_at, double det_h) {
    if (!(det_h >= 1.0) || !(det_at >= det_h)) {
        throw std::invalid_argument("bounds: need det(A_T) >= det(H) >= 1");
    }
    return hlinucb_regret_bound(T, d, sigma, delta, phi, theta_norm, std::log(det_at), std::log(det_h));
}

}  // namespace hcb::bounds
