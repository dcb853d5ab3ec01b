#include "hcb/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcb/bounds.hpp"
#include "hcb/harness.hpp"

namespace hcb {

namespace {

std::vector<PolicyName> parse_policy_list(const std::string& csv) {
    std::vector<PolicyName> out;
    std::stringstream ss(csv);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        const auto p = parse_policy(name);
        if (!p) throw CLI::ValidationError("--policies", "unknown policy '" + name + "'");
        out.push_back(*p);
    }
    if (out.empty()) throw CLI::ValidationError("--policies", "no policies given");
    return out;
}

int cmd_run(const ExperimentConfig& config, std::ostream& out) {
    std::filesystem::create_directories(config.out_dir);
    nlohmann::json manifest;
    const AggregateResult result = run_experiment(config, &manifest);

    const auto csv_path = (std::filesystem::path(config.out_dir) / "results.csv").string();
    const auto svg_path = (std::filesystem::path(config.out_dir) / "results.svg").string();
    const auto manifest_path = (std::filesystem::path(config.out_dir) / "manifest.json").string();
    emit_csv(result, csv_path);
    emit_svg(result, svg_path);
    std::ofstream mf(manifest_path);
    if (!mf) throw std::runtime_error("cannot write " + manifest_path);
    mf << manifest.dump(2) << "\n";

    out << "run " << manifest["config_hash"].get<std::string>() << " seed " << config.seed << " rng "
        << RngStream::kAlgorithm << " rounds " << result.rounds << " trials " << result.trials << "\n";
    for (const auto& agg : result.policies) {
        out << "  " << agg.policy << ": terminal per-round reward " << agg.terminal_mean() << " (std "
            << agg.terminal_std() << "), mean cum regret " << agg.mean_cum_regret.back()
            << (agg.any_truncated ? " [truncated]" : "") << "\n";
    }
    out << "wrote " << csv_path << ", " << svg_path << ", " << manifest_path << "\n";
    return 0;
}

bounds::TightBoundInputs tight_inputs_from_json(const nlohmann::json& j) {
    bounds::TightBoundInputs in;
    in.T = j.at("T").get<double>();
    for (const auto& c : j.at("suboptimal_clusters")) {
        in.suboptimal_clusters.push_back(
            {c.at("delta").get<double>(), c.value("hist", 0.0)});
    }
    in.optimal_cluster_hist = j.value("optimal_cluster_hist", 0.0);
    if (j.contains("optimal_cluster_arms")) {
        for (const auto& a : j.at("optimal_cluster_arms")) {
            in.optimal_cluster_arms.push_back({a.at("gap").get<double>(), a.value("hist", 0.0)});
        }
    }
    in.best_arm_hist = j.value("best_arm_hist", 0.0);
    return in;
}

bounds::PrimeBoundInputs prime_inputs_from_json(const nlohmann::json& j) {
    bounds::PrimeBoundInputs in;
    in.T = j.at("T").get<double>();
    in.r = j.at("r").get<double>();
    in.s = j.at("s").get<double>();
    for (const auto& c : j.at("suboptimal_cluster_gaps")) {
        in.suboptimal_cluster_gaps.push_back(c.get<std::vector<double>>());
    }
    if (j.contains("optimal_cluster_arms")) {
        for (const auto& a : j.at("optimal_cluster_arms")) {
            in.optimal_cluster_arms.push_back({a.at("gap").get<double>(), a.value("hist", 0.0)});
        }
    }
    in.best_arm_hist = j.value("best_arm_hist", 0.0);
    return in;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"history- and cluster-aware bandit experiments"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    ExperimentConfig config;
    std::string env_name = "synthetic-classical";
    std::string policies_csv = "ucb,hucb,ucbc,hucbc,meta";
    std::string cluster_mode = "quintile";
    std::string resample = "per-trial";
    int history_size = -1;

    auto* run = app.add_subcommand("run", "run a seeded multi-trial experiment");
    run->add_option("--env", env_name, "environment")
        ->check(CLI::IsMember({"synthetic-classical", "synthetic-contextual", "latency", "dose"}));
    run->add_option("--policies", policies_csv, "comma-separated policy list");
    run->add_option("--rounds", config.rounds, "rounds per trial");
    run->add_option("--trials", config.trials, "independent trials");
    run->add_option("--seed", config.seed, "base seed");
    run->add_option("--alpha", config.alpha, "contextual exploration weight");
    run->add_option("--epsilon", config.contextual.epsilon, "contextual cluster radius");
    run->add_option("--cluster-mode", cluster_mode, "latency clustering")
        ->check(CLI::IsMember({"quintile", "domain"}));
    run->add_option("--history-size", history_size, "dataset history size");
    run->add_option("--history-fraction", config.classical.history_fraction,
                    "fraction of arms with classical history");
    run->add_option("--history-mean", config.classical.history_mean,
                    "Poisson mean of per-arm history length");
    run->add_option("--data", config.data_path, "dataset CSV path");
    run->add_option("--resample-env", resample, "resample synthetic environment per trial")
        ->check(CLI::IsMember({"per-trial", "fixed"}));
    run->add_option("--threads", config.threads, "worker threads (0 = auto)");
    run->add_flag("--meta-share-observations", config.meta_share_observations,
                  "update both meta sub-policies each round");
    run->add_option("--out", config.out_dir, "output directory")->required();

    // --- bounds ------------------------------------------------------------
    auto* bnd = app.add_subcommand("bounds", "evaluate closed-form regret bounds");
    bnd->require_subcommand(1);

    double T = 10000, gap = 0.1, hist_k = 0, hist_kstar = 0;
    auto* b_hucb = bnd->add_subcommand("hucb", "expected suboptimal plays under the history-aware index");
    b_hucb->add_option("--T", T, "horizon")->required();
    b_hucb->add_option("--gap", gap, "reward gap")->required();
    b_hucb->add_option("--H", hist_k, "history of the suboptimal arm");
    b_hucb->add_option("--Hstar", hist_kstar, "history of the best arm");

    std::string inputs_path;
    auto* b_tight = bnd->add_subcommand("hucbc", "tight-clustering regret bound");
    b_tight->add_option("--inputs", inputs_path, "JSON input file")->required();
    auto* b_prime = bnd->add_subcommand("hucbc-prime", "adversarial-clustering regret bound");
    b_prime->add_option("--inputs", inputs_path, "JSON input file")->required();

    double d = 5, sigma = 1.0, delta = 0.05, phi = 1.0, theta_norm = 1.0, det_at = 1.0, det_h = 1.0;
    auto* b_lin = bnd->add_subcommand("hlinucb", "contextual regret bound");
    b_lin->add_option("--T", T, "horizon")->required();
    b_lin->add_option("--d", d, "context dimension")->required();
    b_lin->add_option("--sigma", sigma, "sub-Gaussian noise scale");
    b_lin->add_option("--delta", delta, "failure probability");
    b_lin->add_option("--phi", phi, "sub-Gaussian dual variable");
    b_lin->add_option("--theta-norm", theta_norm, "norm of the true coefficient vector");
    b_lin->add_option("--det-AT", det_at, "determinant of the terminal design matrix")->required();
    b_lin->add_option("--det-H", det_h, "determinant of the history matrix")->required();

    // --- gen-fixture ---------------------------------------------------------
    std::string fixture_kind = "latency", fixture_out;
    LatencyFixtureSpec lat_spec;
    DoseFixtureSpec dose_spec;
    std::uint64_t fixture_seed = 1;
    auto* gen = app.add_subcommand("gen-fixture", "write a synthetic dataset-shaped CSV fixture");
    gen->add_option("--kind", fixture_kind, "fixture family")
        ->check(CLI::IsMember({"latency", "dose"}));
    gen->add_option("--out", fixture_out, "output CSV path")->required();
    gen->add_option("--seed", fixture_seed, "fixture seed");
    gen->add_option("--sources", lat_spec.sources, "latency sources");
    gen->add_option("--readings", lat_spec.readings, "readings per source");
    gen->add_option("--domains", lat_spec.domains, "distinct domains");
    gen->add_option("--patients", dose_spec.patients, "dose patients");
    gen->add_option("--features", dose_spec.features, "dose feature count");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream usage;
        const int code = app.exit(e, usage, usage);
        (code == 0 ? out : err) << usage.str();
        return code;
    }

    try {
        if (run->parsed()) {
            if (env_name == "synthetic-classical") config.env = EnvKind::synthetic_classical;
            else if (env_name == "synthetic-contextual") config.env = EnvKind::synthetic_contextual;
            else if (env_name == "latency") config.env = EnvKind::latency;
            else config.env = EnvKind::dose;
            config.policies = parse_policy_list(policies_csv);
            config.cluster_mode = cluster_mode == "domain" ? LatencyClusterMode::by_domain
                                                           : LatencyClusterMode::by_latency_quintile;
            config.resample = resample == "fixed" ? ResampleMode::fixed : ResampleMode::per_trial;
            config.history_size = history_size >= 0 ? history_size
                                  : config.env == EnvKind::dose ? 1500
                                                                : 200;
            return cmd_run(config, out);
        }
        if (bnd->parsed()) {
            double value = 0.0;
            if (b_hucb->parsed()) {
                value = bounds::hucb_plays_bound(T, gap, hist_k, hist_kstar);
            } else if (b_tight->parsed()) {
                value = bounds::hucbc_tight_regret_bound(tight_inputs_from_json(load_json(inputs_path)));
            } else if (b_prime->parsed()) {
                value = bounds::hucbc_prime_regret_bound(prime_inputs_from_json(load_json(inputs_path)));
            } else {
                value = bounds::hlinucb_regret_bound_from_dets(T, static_cast<int>(d), sigma, delta,
                                                               phi, theta_norm, det_at, det_h);
            }
            char buf[48];
            std::snprintf(buf, sizeof(buf), "%.6f\n", value);
            out << buf;
            return 0;
        }
        if (fixture_kind == "latency") {
            lat_spec.seed = fixture_seed;
            write_latency_fixture(fixture_out, lat_spec);
        } else {
            dose_spec.seed = fixture_seed;
            write_dose_fixture(fixture_out, dose_spec);
        }
        out << "wrote " << fixture_out << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace hcb
