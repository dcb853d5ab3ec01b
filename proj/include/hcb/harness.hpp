#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcb/datasets.hpp"
#include "hcb/environments.hpp"

namespace hcb {

enum class PolicyName {
    ucb,
    hucb,
    ucbc,
    hucbc,
    hucbc_prime,
    meta,
    linucb,
    hlinucb,
    linucbc,
    hlinucbc,
    oracle,
    uniform_random,
};

const char* to_string(PolicyName p);
std::optional<PolicyName> parse_policy(const std::string& name);

enum class EnvKind { synthetic_classical, synthetic_contextual, latency, dose };
enum class ResampleMode { per_trial, fixed };

const char* to_string(EnvKind e);

struct ExperimentConfig {
    EnvKind env = EnvKind::synthetic_classical;
    SyntheticClassicalSpec classical;
    SyntheticContextualSpec contextual;
    std::string data_path;  // latency / dose CSV
    LatencyClusterMode cluster_mode = LatencyClusterMode::by_latency_quintile;
    int history_size = 200;  // latency: total draws; dose: historical split size
    std::vector<PolicyName> policies;
    std::uint64_t rounds = 10000;
    int trials = 20;
    std::uint64_t seed = 42;
    double alpha = 1.0;
    ResampleMode resample = ResampleMode::per_trial;
    bool meta_share_observations = false;
    int threads = 0;  // 0 = hardware concurrency
    std::string out_dir;

    void validate() const;  // throws on inconsistent combinations
    nlohmann::json to_json() const;
    std::string hash() const;  // FNV-1a over the canonical JSON echo
};

/// One policy's run over one trial. Regret is pseudo-regret (expected-reward
/// gaps, Eq.-(1) style); the realized-reward shortfall is kept as a terminal
/// reference figure.
struct RegretCurve {
    std::vector<ArmId> chosen;
    std::vector<double> reward;
    std::vector<double> inst_regret;
    std::vector<double> cum_regret;        // running sum of inst_regret
    std::vector<double> per_round_reward;  // cumulative reward / round index
    std::vector<std::uint32_t> meta_a_count;  // cumulative sub-A plays; meta only
    double realized_regret = 0.0;
    bool truncated = false;
    nlohmann::json env_meta;
    std::uint64_t meta_clamps = 0;

    std::uint64_t rounds() const { return chosen.size(); }
    void push(ArmId arm, double r, double regret_step);
};

struct PolicyAggregate {
    std::string policy;
    std::vector<double> mean_per_round_reward;
    std::vector<double> std_per_round_reward;
    std::vector<double> mean_cum_regret;
    std::vector<double> terminal_cum_regret;  // one per trial
    std::vector<double> terminal_per_round_reward;  // one per trial
    std::vector<double> meta_fraction_a;  // mean trajectory; empty unless meta
    double mean_realized_regret = 0.0;
    bool any_truncated = false;
    std::uint64_t meta_clamps = 0;

    double terminal_mean() const { return mean_per_round_reward.back(); }
    double terminal_std() const { return std_per_round_reward.back(); }
    /// Standard error of the terminal per-round reward across trials.
    double terminal_se() const;
};

struct AggregateResult {
    std::uint64_t rounds = 0;
    int trials = 0;
    std::vector<PolicyAggregate> policies;

    const PolicyAggregate& policy(const std::string& name) const;
};

/// Immutable dataset shared across trials (loaded once per experiment).
struct SharedData {
    std::optional<LatencyDataset> latency;
    std::optional<DoseDataset> dose;
};

SharedData load_shared_data(const ExperimentConfig& config);

/// One policy, one trial; fully determined by (config, shared, trial_index).
RegretCurve run_trial(const ExperimentConfig& config, const SharedData& shared, PolicyName policy,
                      int trial_index);

/// All policies, all trials. Trials run concurrently; the aggregation order
/// is fixed by (policy, trial) index, so results are byte-identical across
/// thread counts. The returned manifest carries everything needed to replay
/// the run (config echo, seed, RNG id, per-trial environment constants,
/// ingestion reports, clip and clamp statistics).
AggregateResult run_experiment(const ExperimentConfig& config, nlohmann::json* manifest = nullptr);

void emit_csv(const AggregateResult& result, const std::string& path);
AggregateResult read_csv(const std::string& path);
void emit_svg(const AggregateResult& result, const std::string& path);

/// Pooled standard error of the difference between two policies' terminal
/// per-round rewards: sqrt(se_a^2 + se_b^2).
double pooled_se(const PolicyAggregate& a, const PolicyAggregate& b);

}  // namespace hcb
