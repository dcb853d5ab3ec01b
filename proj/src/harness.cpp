#include "hcb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hcb/classical.hpp"
#include "hcb/contextual.hpp"
#include "hcb/meta.hpp"

namespace hcb {

namespace {

constexpr std::uint64_t kEnvStreamBase = 1'000'000;
constexpr std::uint64_t kOnlineStreamBase = 2'000'000;

bool is_contextual_policy(PolicyName p) {
    switch (p) {
        case PolicyName::linucb:
        case PolicyName::hlinucb:
        case PolicyName::linucbc:
        case PolicyName::hlinucbc:
            return true;
        default:
            return false;
    }
}

bool is_classical_policy(PolicyName p) {
    switch (p) {
        case PolicyName::ucb:
        case PolicyName::hucb:
        case PolicyName::ucbc:
        case PolicyName::hucbc:
        case PolicyName::hucbc_prime:
            return true;
        default:
            return false;
    }
}

}  // namespace

const char* to_string(PolicyName p) {
    switch (p) {
        case PolicyName::ucb: return "ucb";
        case PolicyName::hucb: return "hucb";
        case PolicyName::ucbc: return "ucbc";
        case PolicyName::hucbc: return "hucbc";
        case PolicyName::hucbc_prime: return "hucbc-prime";
        case PolicyName::meta: return "meta";
        case PolicyName::linucb: return "linucb";
        case PolicyName::hlinucb: return "hlinucb";
        case PolicyName::linucbc: return "linucbc";
        case PolicyName::hlinucbc: return "hlinucbc";
        case PolicyName::oracle: return "oracle";
        case PolicyName::uniform_random: return "random";
    }
    return "?";
}

std::optional<PolicyName> parse_policy(const std::string& name) {
    static const std::pair<const char*, PolicyName> table[] = {
        {"ucb", PolicyName::ucb},
        {"hucb", PolicyName::hucb},
        {"ucbc", PolicyName::ucbc},
        {"hucbc", PolicyName::hucbc},
        {"hucbc-prime", PolicyName::hucbc_prime},
        {"meta", PolicyName::meta},
        {"linucb", PolicyName::linucb},
        {"hlinucb", PolicyName::hlinucb},
        {"linucbc", PolicyName::linucbc},
        {"hlinucbc", PolicyName::hlinucbc},
        {"oracle", PolicyName::oracle},
        {"random", PolicyName::uniform_random},
    };
    for (const auto& [key, value] : table) {
        if (name == key) return value;
    }
    return std::nullopt;
}

const char* to_string(EnvKind e) {
    switch (e) {
        case EnvKind::synthetic_classical: return "synthetic-classical";
        case EnvKind::synthetic_contextual: return "synthetic-contextual";
        case EnvKind::latency: return "latency";
        case EnvKind::dose: return "dose";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (rounds < 1) throw std::invalid_argument("config: rounds must be >= 1");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (policies.empty()) throw std::invalid_argument("config: no policies selected");
    const bool env_contextual = env == EnvKind::synthetic_contextual || env == EnvKind::dose;
    for (PolicyName p : policies) {
        if (env_contextual && is_classical_policy(p)) {
            throw std::invalid_argument(std::string("config: classical policy '") + to_string(p) +
                                        "' on a contextual environment");
        }
        if (!env_contextual && is_contextual_policy(p)) {
            throw std::invalid_argument(std::string("config: contextual policy '") + to_string(p) +
                                        "' on a classical environment");
        }
    }
    if ((env == EnvKind::latency || env == EnvKind::dose) && data_path.empty()) {
        throw std::invalid_argument("config: dataset environment needs a data path");
    }
    if (!(alpha > 0.0)) throw std::invalid_argument("config: alpha must be > 0");
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["env"] = to_string(env);
    j["rounds"] = rounds;
    j["trials"] = trials;
    j["seed"] = seed;
    j["alpha"] = alpha;
    j["resample_env"] = resample == ResampleMode::per_trial ? "per-trial" : "fixed";
    j["meta_share_observations"] = meta_share_observations;
    auto names = nlohmann::json::array();
    for (PolicyName p : policies) names.push_back(to_string(p));
    j["policies"] = std::move(names);
    switch (env) {
        case EnvKind::synthetic_classical:
            j["num_clusters"] = classical.num_clusters;
            j["num_arms"] = classical.num_arms;
            j["history_fraction"] = classical.history_fraction;
            j["history_mean"] = classical.history_mean;
            break;
        case EnvKind::synthetic_contextual:
            j["num_clusters"] = contextual.num_clusters;
            j["num_arms"] = contextual.num_arms;
            j["dim"] = contextual.dim;
            j["epsilon"] = contextual.epsilon;
            j["history_mean"] = contextual.history_mean;
            break;
        case EnvKind::latency:
            j["data"] = data_path;
            j["cluster_mode"] =
                cluster_mode == LatencyClusterMode::by_domain ? "domain" : "quintile";
            j["history_size"] = history_size;
            break;
        case EnvKind::dose:
            j["data"] = data_path;
            j["history_size"] = history_size;
            break;
    }
    return j;
}

std::string ExperimentConfig::hash() const {
    const std::string canon = to_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void RegretCurve::push(ArmId arm, double r, double regret_step) {
    chosen.push_back(arm);
    reward.push_back(r);
    inst_regret.push_back(regret_step);
    cum_regret.push_back((cum_regret.empty() ? 0.0 : cum_regret.back()) + regret_step);
    const double cum_reward =
        per_round_reward.empty() ? r : per_round_reward.back() * static_cast<double>(reward.size() - 1) + r;
    per_round_reward.push_back(cum_reward / static_cast<double>(reward.size()));
}

double PolicyAggregate::terminal_se() const {
    const auto n = terminal_per_round_reward.size();
    if (n < 2) return 0.0;
    return terminal_std() / std::sqrt(static_cast<double>(n));
}

const PolicyAggregate& AggregateResult::policy(const std::string& name) const {
    for (const auto& p : policies) {
        if (p.policy == name) return p;
    }
    throw std::out_of_range("no aggregate for policy " + name);
}

double pooled_se(const PolicyAggregate& a, const PolicyAggregate& b) {
    return std::sqrt(a.terminal_se() * a.terminal_se() + b.terminal_se() * b.terminal_se());
}

SharedData load_shared_data(const ExperimentConfig& config) {
    SharedData shared;
    if (config.env == EnvKind::latency) {
        shared.latency = load_latency(config.data_path, config.cluster_mode);
    } else if (config.env == EnvKind::dose) {
        shared.dose = load_dose(config.data_path);
    }
    return shared;
}

// ---------------------------------------------------------------------------
// Trial execution
// ---------------------------------------------------------------------------

namespace {

struct ClassicalSetup {
    std::unique_ptr<ClassicalEnv> env;
    std::vector<std::vector<double>> history;  // per-arm historical rewards
};

ClassicalSetup make_classical_setup(const ExperimentConfig& config, const SharedData& shared,
                                    int trial) {
    const std::uint64_t env_stream_id = config.resample == ResampleMode::fixed
                                            ? kEnvStreamBase
                                            : kEnvStreamBase + 1 + static_cast<std::uint64_t>(trial);
    RngStream env_rng(config.seed, env_stream_id);
    ClassicalSetup out;
    if (config.env == EnvKind::synthetic_classical) {
        auto env = gen_classical(config.classical, env_rng);
        out.history = gen_history_classical(env, config.classical.history_fraction,
                                            config.classical.history_mean, env_rng);
        out.env = std::make_unique<SyntheticClassicalEnv>(std::move(env));
    } else {
        out.history = gen_history_latency(*shared.latency, config.history_size, env_rng);
        out.env = std::make_unique<LatencyReplayEnv>(*shared.latency);
    }
    return out;
}

struct ContextualSetup {
    std::unique_ptr<ContextualEnv> env;
    ContextualHistory history;
};

ContextualSetup make_contextual_setup(const ExperimentConfig& config, const SharedData& shared,
                                      int trial) {
    ContextualSetup out;
    if (config.env == EnvKind::synthetic_contextual) {
        const std::uint64_t env_stream_id =
            config.resample == ResampleMode::fixed
                ? kEnvStreamBase
                : kEnvStreamBase + 1 + static_cast<std::uint64_t>(trial);
        RngStream env_rng(config.seed, env_stream_id);
        auto env = gen_contextual(config.contextual, env_rng);
        out.history = gen_history_contextual(config.contextual, env, env_rng);
        out.env = std::make_unique<SyntheticContextualEnv>(std::move(env));
    } else {
        // Dataset replay is shuffled per trial by definition.
        RngStream env_rng(config.seed, kEnvStreamBase + 1 + static_cast<std::uint64_t>(trial));
        auto env = std::make_unique<DoseReplayEnv>(*shared.dose, config.history_size, env_rng);
        out.history = env->make_history(env_rng);
        out.env = std::move(env);
    }
    return out;
}

ClassicalPolicy make_classical_policy(ClassicalKind kind, const ClassicalEnv& env,
                                      const std::vector<std::vector<double>>& history) {
    ClassicalPolicy policy(kind, env.clusters());
    const bool with_history = kind == ClassicalKind::hucb || kind == ClassicalKind::hucbc ||
                              kind == ClassicalKind::hucbc_prime;
    if (with_history) {
        for (ArmId k = 0; k < env.num_arms(); ++k) {
            for (double r : history[static_cast<std::size_t>(k)]) policy.record_history(k, r);
        }
    }
    return policy;
}

ContextualPolicy make_contextual_policy(ContextualKind kind, const ContextualEnv& env,
                                        const ContextualHistory& history, double alpha) {
    return ContextualPolicy(kind, env.clusters(), env.dim(), alpha, history.arm_seeds,
                            history.cluster_seeds);
}

RegretCurve run_classical_trial(const ExperimentConfig& config, const SharedData& shared,
                                PolicyName name, int trial) {
    auto setup = make_classical_setup(config, shared, trial);
    ClassicalEnv& env = *setup.env;
    RngStream online(config.seed, kOnlineStreamBase + static_cast<std::uint64_t>(trial));
    env.reset_replay(online);

    std::optional<ClassicalPolicy> policy;
    std::optional<MetaPolicy<ClassicalPolicy>> meta;
    switch (name) {
        case PolicyName::ucb: policy = make_classical_policy(ClassicalKind::ucb, env, setup.history); break;
        case PolicyName::hucb: policy = make_classical_policy(ClassicalKind::hucb, env, setup.history); break;
        case PolicyName::ucbc: policy = make_classical_policy(ClassicalKind::ucbc, env, setup.history); break;
        case PolicyName::hucbc: policy = make_classical_policy(ClassicalKind::hucbc, env, setup.history); break;
        case PolicyName::hucbc_prime:
            policy = make_classical_policy(ClassicalKind::hucbc_prime, env, setup.history);
            break;
        case PolicyName::meta: {
            auto [lo, hi] = env.reward_range();
            meta.emplace(make_classical_policy(ClassicalKind::hucbc, env, setup.history),
                         make_classical_policy(ClassicalKind::hucb, env, setup.history), lo, hi,
                         config.meta_share_observations);
            break;
        }
        case PolicyName::oracle:
        case PolicyName::uniform_random:
            break;
        default:
            throw std::invalid_argument("classical environment cannot run contextual policy");
    }

    RegretCurve curve;
    const double best = env.best_mean();
    const ArmId best_arm = env.best_arm();
    for (std::uint64_t t = 0; t < config.rounds; ++t) {
        ArmId arm = 0;
        int sub = -1;
        if (policy) {
            arm = policy->select();
        } else if (meta) {
            const auto choice = meta->select();
            arm = choice.arm;
            sub = choice.sub;
        } else if (name == PolicyName::oracle) {
            arm = best_arm;
        } else {
            arm = static_cast<ArmId>(online.below(static_cast<std::uint64_t>(env.num_arms())));
        }
        const double r = env.draw(arm, online);
        if (policy) {
            policy->update(arm, r);
        } else if (meta) {
            meta->update(sub, arm, r);
        }
        curve.push(arm, r, best - env.mean(arm));
        curve.realized_regret += best - r;
        if (meta) {
            const std::uint32_t prev = curve.meta_a_count.empty() ? 0 : curve.meta_a_count.back();
            curve.meta_a_count.push_back(prev + (sub == 0 ? 1 : 0));
        }
    }
    if (meta) curve.meta_clamps = meta->clamp_count();
    env.describe(curve.env_meta);
    return curve;
}

RegretCurve run_contextual_trial(const ExperimentConfig& config, const SharedData& shared,
                                 PolicyName name, int trial) {
    auto setup = make_contextual_setup(config, shared, trial);
    ContextualEnv& env = *setup.env;
    RngStream online(config.seed, kOnlineStreamBase + static_cast<std::uint64_t>(trial));
    env.reset_replay(online);

    std::optional<ContextualPolicy> policy;
    std::optional<MetaPolicy<ContextualPolicy>> meta;
    switch (name) {
        case PolicyName::linucb:
            policy = make_contextual_policy(ContextualKind::linucb, env, setup.history, config.alpha);
            break;
        case PolicyName::hlinucb:
            policy = make_contextual_policy(ContextualKind::hlinucb, env, setup.history, config.alpha);
            break;
        case PolicyName::linucbc:
            policy = make_contextual_policy(ContextualKind::linucbc, env, setup.history, config.alpha);
            break;
        case PolicyName::hlinucbc:
            policy = make_contextual_policy(ContextualKind::hlinucbc, env, setup.history, config.alpha);
            break;
        case PolicyName::meta: {
            auto [lo, hi] = env.reward_range();
            meta.emplace(make_contextual_policy(ContextualKind::hlinucbc, env, setup.history, config.alpha),
                         make_contextual_policy(ContextualKind::hlinucb, env, setup.history, config.alpha),
                         lo, hi, config.meta_share_observations);
            break;
        }
        case PolicyName::oracle:
        case PolicyName::uniform_random:
            break;
        default:
            throw std::invalid_argument("contextual environment cannot run classical policy");
    }

    RegretCurve curve;
    Eigen::VectorXd x;
    for (std::uint64_t t = 0; t < config.rounds; ++t) {
        if (!env.next_context(x, online)) {
            curve.truncated = true;
            break;
        }
        ArmId arm = 0;
        int sub = -1;
        if (policy) {
            arm = policy->select(x);
        } else if (meta) {
            const auto choice = meta->select(x);
            arm = choice.arm;
            sub = choice.sub;
        } else if (name == PolicyName::oracle) {
            arm = env.best_arm(x);
        } else {
            arm = static_cast<ArmId>(online.below(static_cast<std::uint64_t>(env.num_arms())));
        }
        const double r = env.draw(arm, x, online);
        if (policy) {
            policy->update(arm, x, r);
        } else if (meta) {
            meta->update(sub, arm, r, x);
        }
        const double best = env.best_expected(x);
        curve.push(arm, r, best - env.expected(arm, x));
        curve.realized_regret += best - r;
        if (meta) {
            const std::uint32_t prev = curve.meta_a_count.empty() ? 0 : curve.meta_a_count.back();
            curve.meta_a_count.push_back(prev + (sub == 0 ? 1 : 0));
        }
    }
    if (meta) curve.meta_clamps = meta->clamp_count();
    env.describe(curve.env_meta);
    return curve;
}

}  // namespace

RegretCurve run_trial(const ExperimentConfig& config, const SharedData& shared, PolicyName policy,
                      int trial_index) {
    const bool env_contextual =
        config.env == EnvKind::synthetic_contextual || config.env == EnvKind::dose;
    return env_contextual ? run_contextual_trial(config, shared, policy, trial_index)
                          : run_classical_trial(config, shared, policy, trial_index);
}

AggregateResult run_experiment(const ExperimentConfig& config, nlohmann::json* manifest) {
    config.validate();
    const SharedData shared = load_shared_data(config);

    const int trials = config.trials;
    const std::size_t tasks = config.policies.size() * static_cast<std::size_t>(trials);
    std::vector<RegretCurve> curves(tasks);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        config.threads > 0 ? static_cast<unsigned>(config.threads) : std::min<unsigned>(hw, 16);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) {
            const auto pi = i / static_cast<std::size_t>(trials);
            const auto trial = static_cast<int>(i % static_cast<std::size_t>(trials));
            curves[i] = run_trial(config, shared, config.policies[pi], trial);
        }
    };
    if (workers <= 1 || tasks == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < std::min<std::size_t>(workers, tasks); ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Common effective horizon (dataset runs may be shorter than requested).
    std::uint64_t rounds = config.rounds;
    for (const auto& c : curves) rounds = std::min(rounds, c.rounds());
    if (rounds == 0) throw std::runtime_error("run_experiment: environment produced no rounds");

    AggregateResult result;
    result.rounds = rounds;
    result.trials = trials;
    for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
        PolicyAggregate agg;
        agg.policy = to_string(config.policies[pi]);
        agg.mean_per_round_reward.assign(rounds, 0.0);
        agg.std_per_round_reward.assign(rounds, 0.0);
        agg.mean_cum_regret.assign(rounds, 0.0);
        const bool is_meta = config.policies[pi] == PolicyName::meta;
        if (is_meta) agg.meta_fraction_a.assign(rounds, 0.0);

        for (int trial = 0; trial < trials; ++trial) {
            const auto& c = curves[pi * static_cast<std::size_t>(trials) + static_cast<std::size_t>(trial)];
            for (std::uint64_t t = 0; t < rounds; ++t) {
                const double v = c.per_round_reward[t];
                agg.mean_per_round_reward[t] += v;
                agg.std_per_round_reward[t] += v * v;  // raw second moment for now
                agg.mean_cum_regret[t] += c.cum_regret[t];
                if (is_meta) {
                    agg.meta_fraction_a[t] +=
                        static_cast<double>(c.meta_a_count[t]) / static_cast<double>(t + 1);
                }
            }
            agg.terminal_cum_regret.push_back(c.cum_regret[rounds - 1]);
            agg.terminal_per_round_reward.push_back(c.per_round_reward[rounds - 1]);
            agg.mean_realized_regret += c.realized_regret;
            agg.any_truncated = agg.any_truncated || c.truncated;
            agg.meta_clamps += c.meta_clamps;
        }
        const auto n = static_cast<double>(trials);
        agg.mean_realized_regret /= n;
        for (std::uint64_t t = 0; t < rounds; ++t) {
            const double mean = agg.mean_per_round_reward[t] / n;
            const double second = agg.std_per_round_reward[t] / n;
            agg.mean_per_round_reward[t] = mean;
            // Sample standard deviation; zero for a single trial.
            const double var = trials > 1 ? std::max(0.0, (second - mean * mean) * n / (n - 1.0)) : 0.0;
            agg.std_per_round_reward[t] = std::sqrt(var);
            agg.mean_cum_regret[t] /= n;
            if (is_meta) agg.meta_fraction_a[t] /= n;
        }
        result.policies.push_back(std::move(agg));
    }

    if (manifest) {
        nlohmann::json& m = *manifest;
        m["config"] = config.to_json();
        m["config_hash"] = config.hash();
        m["seed"] = config.seed;
        m["rng_algorithm"] = RngStream::kAlgorithm;
        m["rounds_effective"] = rounds;
        auto envs = nlohmann::json::array();
        const int env_entries = config.resample == ResampleMode::fixed &&
                                        (config.env == EnvKind::synthetic_classical ||
                                         config.env == EnvKind::synthetic_contextual)
                                    ? 1
                                    : trials;
        for (int trial = 0; trial < env_entries; ++trial) {
            envs.push_back(curves[static_cast<std::size_t>(trial)].env_meta);
        }
        m["environments"] = std::move(envs);
        if (shared.latency) {
            m["dataset"] = {{"rows_read", shared.latency->report.rows_read},
                            {"rows_dropped", shared.latency->report.rows_dropped},
                            {"row_errors", shared.latency->report.row_errors},
                            {"warnings", shared.latency->report.warnings},
                            {"min_latency_ms", shared.latency->min_latency},
                            {"max_latency_ms", shared.latency->max_latency}};
        }
        if (shared.dose) {
            m["dataset"] = {{"rows_read", shared.dose->report.rows_read},
                            {"rows_dropped", shared.dose->report.rows_dropped},
                            {"row_errors", shared.dose->report.row_errors},
                            {"warnings", shared.dose->report.warnings},
                            {"dim", shared.dose->dim}};
        }
        auto pols = nlohmann::json::array();
        for (const auto& agg : result.policies) {
            pols.push_back({{"policy", agg.policy},
                            {"terminal_mean_per_round_reward", agg.terminal_mean()},
                            {"terminal_std_per_round_reward", agg.terminal_std()},
                            {"mean_terminal_cum_regret",
                             std::accumulate(agg.terminal_cum_regret.begin(),
                                             agg.terminal_cum_regret.end(), 0.0) /
                                 static_cast<double>(trials)},
                            {"mean_realized_regret", agg.mean_realized_regret},
                            {"truncated", agg.any_truncated},
                            {"meta_clamped_rewards", agg.meta_clamps}});
        }
        m["policies"] = std::move(pols);
    }
    return result;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

void emit_csv(const AggregateResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "policy,round,mean_per_round_reward,std_per_round_reward,mean_cum_regret\n";
    char buf[160];
    for (const auto& agg : result.policies) {
        for (std::uint64_t t = 0; t < result.rounds; ++t) {
            std::snprintf(buf, sizeof(buf), "%s,%llu,%.17g,%.17g,%.17g\n", agg.policy.c_str(),
                          static_cast<unsigned long long>(t + 1), agg.mean_per_round_reward[t],
                          agg.std_per_round_reward[t], agg.mean_cum_regret[t]);
            out << buf;
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

AggregateResult read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "policy,round,mean_per_round_reward,std_per_round_reward,mean_cum_regret") {
        throw std::runtime_error(path + ": unexpected results header");
    }
    AggregateResult result;
    std::uint64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string policy, field;
        if (!std::getline(ss, policy, ',')) throw std::runtime_error("bad row at line " + std::to_string(line_no));
        double vals[4];
        for (double& v : vals) {
            if (!std::getline(ss, field, ',')) {
                throw std::runtime_error("bad row at line " + std::to_string(line_no));
            }
            v = std::strtod(field.c_str(), nullptr);
        }
        if (result.policies.empty() || result.policies.back().policy != policy) {
            PolicyAggregate agg;
            agg.policy = policy;
            result.policies.push_back(std::move(agg));
        }
        auto& agg = result.policies.back();
        agg.mean_per_round_reward.push_back(vals[1]);
        agg.std_per_round_reward.push_back(vals[2]);
        agg.mean_cum_regret.push_back(vals[3]);
    }
    if (!result.policies.empty()) result.rounds = result.policies.front().mean_per_round_reward.size();
    return result;
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

struct ChartScale {
    double x0, x1, y0, y1;
    double px(double x) const { return 70.0 + (x - x0) / (x1 - x0) * 760.0; }
    double py(double y) const { return 20.0 + (y1 - y) / (y1 - y0) * 450.0; }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void emit_svg(const AggregateResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);

    double lo = 0.0, hi = 1.0;
    bool first = true;
    for (const auto& agg : result.policies) {
        for (std::uint64_t t = 0; t < result.rounds; ++t) {
            const double a = agg.mean_per_round_reward[t] - agg.std_per_round_reward[t];
            const double b = agg.mean_per_round_reward[t] + agg.std_per_round_reward[t];
            if (first) {
                lo = a;
                hi = b;
                first = false;
            } else {
                lo = std::min(lo, a);
                hi = std::max(hi, b);
            }
        }
    }
    if (first) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    const ChartScale sc{1.0, static_cast<double>(std::max<std::uint64_t>(result.rounds, 2)), lo, hi};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"880\" height=\"540\" "
           "viewBox=\"0 0 880 540\">\n"
        << "<rect width=\"880\" height=\"540\" fill=\"white\"/>\n"
        << "<line x1=\"70\" y1=\"470\" x2=\"830\" y2=\"470\" stroke=\"black\"/>\n"
        << "<line x1=\"70\" y1=\"20\" x2=\"70\" y2=\"470\" stroke=\"black\"/>\n"
        << "<text x=\"450\" y=\"505\" text-anchor=\"middle\" font-size=\"14\">round</text>\n"
        << "<text x=\"18\" y=\"245\" text-anchor=\"middle\" font-size=\"14\" "
           "transform=\"rotate(-90 18 245)\">per-round reward</text>\n";
    for (int g = 0; g <= 4; ++g) {
        const double y = lo + (hi - lo) * g / 4.0;
        out << "<text x=\"64\" y=\"" << fmt(sc.py(y) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
            << fmt(y) << "</text>\n";
        const double x = 1.0 + (sc.x1 - 1.0) * g / 4.0;
        out << "<text x=\"" << fmt(sc.px(x)) << "\" y=\"488\" text-anchor=\"middle\" font-size=\"11\">"
            << fmt(std::round(x)) << "</text>\n";
    }

    const std::uint64_t stride = std::max<std::uint64_t>(1, result.rounds / 400);
    for (std::size_t pi = 0; pi < result.policies.size(); ++pi) {
        const auto& agg = result.policies[pi];
        const char* color = kPalette[pi % std::size(kPalette)];
        // +-1 std band
        std::string band = "<path fill=\"" + std::string(color) + "\" fill-opacity=\"0.12\" stroke=\"none\" d=\"";
        bool started = false;
        for (std::uint64_t t = 0; t < result.rounds; t += stride) {
            const double x = sc.px(static_cast<double>(t + 1));
            const double y = sc.py(agg.mean_per_round_reward[t] + agg.std_per_round_reward[t]);
            band += (started ? "L" : "M") + fmt(x) + " " + fmt(y) + " ";
            started = true;
        }
        for (std::uint64_t i = result.rounds; i-- > 0;) {
            if (i % stride != 0) continue;
            band += "L" + fmt(sc.px(static_cast<double>(i + 1))) + " " +
                    fmt(sc.py(agg.mean_per_round_reward[i] - agg.std_per_round_reward[i])) + " ";
        }
        band += "Z\"/>";
        out << band << "\n";

        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (std::uint64_t t = 0; t < result.rounds; t += stride) {
            out << fmt(sc.px(static_cast<double>(t + 1))) << ","
                << fmt(sc.py(agg.mean_per_round_reward[t])) << " ";
        }
        out << fmt(sc.px(static_cast<double>(result.rounds))) << ","
            << fmt(sc.py(agg.mean_per_round_reward[result.rounds - 1])) << "\"/>\n";

        const double ly = 34.0 + 18.0 * static_cast<double>(pi);
        out << "<rect x=\"745\" y=\"" << fmt(ly - 9) << "\" width=\"12\" height=\"12\" fill=\"" << color
            << "\"/>\n<text x=\"762\" y=\"" << fmt(ly + 1) << "\" font-size=\"12\">" << agg.policy
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace hcb
