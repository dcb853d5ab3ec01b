#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hcb/environments.hpp"

namespace hcb {

/// Ingestion report shared by both loaders; surfaced in the run manifest.
struct LoadReport {
    std::uint64_t rows_read = 0;
    std::uint64_t rows_dropped = 0;
    std::vector<std::string> row_errors;  // "line N: why", one per rejected row
    std::vector<std::string> warnings;
};

// ---------------------------------------------------------------------------
// Web-latency dataset (classical bandit over logged response times)
// ---------------------------------------------------------------------------

enum class LatencyClusterMode { by_latency_quintile, by_domain };

/// Parsed latency log: one arm per source, rewards are negated min-max
/// normalized latencies in (0,1) (fastest observation -> 1, slowest -> 0).
struct LatencyDataset {
    std::vector<std::string> source_ids;          // arm -> source id
    std::vector<std::string> source_domains;      // arm -> domain
    std::vector<std::vector<double>> traces;      // arm -> raw latencies, file order
    double min_latency = 0.0;
    double max_latency = 0.0;
    LatencyClusterMode mode = LatencyClusterMode::by_latency_quintile;
    LoadReport report;

    int num_sources() const { return static_cast<int>(traces.size()); }
    double normalize(double latency) const {
        return 1.0 - (latency - min_latency) / (max_latency - min_latency);
    }
    ClusterMap make_clusters() const;
};

/// Load CSV with header `source_id,domain,latency_ms`. Malformed rows are
/// rejected with their line number in the report; sources whose trace ends
/// up empty are dropped with a warning.
LatencyDataset load_latency(const std::string& path, LatencyClusterMode mode);

/// Total `history_size` historical rewards drawn uniformly over all
/// (source, observation) pairs; returned per arm, normalized.
std::vector<std::vector<double>> gen_history_latency(const LatencyDataset& data, int history_size,
                                                     RngStream& rng);

/// Trace replay as a classical environment: each play of a source pops the
/// next observation from its per-trial shuffled trace, reshuffling when a
/// trace is exhausted. Arm means are full-trace averages.
class LatencyReplayEnv final : public ClassicalEnv {
public:
    explicit LatencyReplayEnv(const LatencyDataset& data);

    std::unique_ptr<ClassicalEnv> clone() const override {
        return std::make_unique<LatencyReplayEnv>(*this);
    }
    int num_arms() const override { return static_cast<int>(rewards_.size()); }
    const ClusterMap& clusters() const override { return map_; }
    double draw(ArmId arm, RngStream& rng) override;
    double mean(ArmId arm) const override { return means_.at(static_cast<std::size_t>(arm)); }
    std::pair<double, double> reward_range() const override { return {0.0, 1.0}; }
    void reset_replay(RngStream& rng) override;
    void describe(nlohmann::json& out) const override;

private:
    ClusterMap map_;
    std::vector<std::vector<double>> rewards_;  // normalized, trial-shuffled in place
    std::vector<std::size_t> cursor_;
    std::vector<double> means_;
    double min_latency_;
    double max_latency_;
    std::string mode_name_;
};

// ---------------------------------------------------------------------------
// Hierarchical dose dataset (contextual bandit over a 15-class task)
// ---------------------------------------------------------------------------

constexpr int kDoseFineClasses = 15;
constexpr int kDoseCoarseClasses = 3;
constexpr int kDoseFinePerCoarse = 5;

/// Fine label (1-based) -> coarse cluster (0-based): ceil(label/5) - 1.
constexpr int dose_coarse_of(int fine_label_1based) {
    return (fine_label_1based - 1) / kDoseFinePerCoarse;
}

struct DoseDataset {
    std::vector<Eigen::VectorXd> features;  // raw, unstandardized
    std::vector<int> labels;                // 1..15
    int dim = 0;
    LoadReport report;

    int num_patients() const { return static_cast<int>(labels.size()); }
};

/// Load CSV with header `f1,...,fd,label`; rows with unknown labels or
/// missing/non-numeric features are rejected and counted.
DoseDataset load_dose(const std::string& path);

/// One trial's view of the dose data: rows shuffled, the first history_size
/// are the historical split (which also fixes the standardization constants),
/// the rest replay as online rounds. Reward is 1 iff the played fine arm
/// matches the patient's label.
class DoseReplayEnv final : public ContextualEnv {
public:
    DoseReplayEnv(const DoseDataset& data, int history_size, RngStream& rng);

    std::unique_ptr<ContextualEnv> clone() const override {
        return std::make_unique<DoseReplayEnv>(*this);
    }
    int num_arms() const override { return kDoseFineClasses; }
    int dim() const override { return dim_; }
    const ClusterMap& clusters() const override { return map_; }
    bool next_context(Eigen::VectorXd& x, RngStream& rng) override;
    double draw(ArmId arm, const Eigen::VectorXd& x, RngStream& rng) override;
    double expected(ArmId arm, const Eigen::VectorXd& x) const override;
    std::pair<double, double> reward_range() const override { return {0.0, 1.0}; }
    void describe(nlohmann::json& out) const override;

    int online_rounds() const { return static_cast<int>(online_x_.size()); }
    /// Seeds built from the historical split under a uniform random logging
    /// policy (one arm per historical row, reward 1 iff it hits the label).
    ContextualHistory make_history(RngStream& rng) const;

    const Eigen::VectorXd& feature_means() const { return mu_; }
    const Eigen::VectorXd& feature_scales() const { return scale_; }

private:
    Eigen::VectorXd standardize(const Eigen::VectorXd& raw) const;

    ClusterMap map_;
    int dim_;
    int history_size_;
    Eigen::VectorXd mu_;
    Eigen::VectorXd scale_;
    std::vector<Eigen::VectorXd> hist_x_;  // standardized
    std::vector<int> hist_label_;
    std::vector<Eigen::VectorXd> online_x_;  // standardized
    std::vector<int> online_label_;
    std::size_t cursor_ = 0;
    int current_label_ = -1;
};

// ---------------------------------------------------------------------------
// Synthetic fixtures shaped like the two datasets (the real data is not
// bundled); used by tests and the gen-fixture CLI subcommand.
// ---------------------------------------------------------------------------

struct LatencyFixtureSpec {
    int sources = 700;
    int readings = 1300;  // per source, +-10% jitter
    int domains = 17;     // assigned independently of latency (scrambled clustering)
    std::uint64_t seed = 1;
};

struct DoseFixtureSpec {
    int patients = 5000;
    int features = 10;
    double coarse_radius = 5.0;  // coarse centroid distance from origin
    double fine_radius = 2.0;    // fine centroid offset within its coarse class
    double noise = 1.0;          // per-patient feature noise
    std::uint64_t seed = 1;
};

void write_latency_fixture(const std::string& path, const LatencyFixtureSpec& spec);
void write_dose_fixture(const std::string& path, const DoseFixtureSpec& spec);

}  // namespace hcb
