#include "hcb/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hcb {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

}  // namespace

// ---------------------------------------------------------------------------
// Latency
// ---------------------------------------------------------------------------

ClusterMap LatencyDataset::make_clusters() const {
    const int n = num_sources();
    if (mode == LatencyClusterMode::by_domain) {
        std::map<std::string, ClusterId> ids;
        std::vector<ClusterId> assignment(static_cast<std::size_t>(n));
        for (int s = 0; s < n; ++s) {
            const auto& dom = source_domains[static_cast<std::size_t>(s)];
            auto [it, inserted] = ids.try_emplace(dom, static_cast<ClusterId>(ids.size()));
            assignment[static_cast<std::size_t>(s)] = it->second;
        }
        return ClusterMap(std::move(assignment), static_cast<int>(ids.size()));
    }
    // Equal-frequency bins over per-source average latency, fastest first.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> avg(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        const auto& tr = traces[static_cast<std::size_t>(s)];
        avg[static_cast<std::size_t>(s)] = std::accumulate(tr.begin(), tr.end(), 0.0) / tr.size();
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return avg[static_cast<std::size_t>(a)] < avg[static_cast<std::size_t>(b)]; });
    constexpr int kBins = 5;
    std::vector<ClusterId> assignment(static_cast<std::size_t>(n));
    for (int rank = 0; rank < n; ++rank) {
        assignment[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])] =
            static_cast<ClusterId>(static_cast<long long>(rank) * kBins / n);
    }
    return ClusterMap(std::move(assignment), kBins);
}

LatencyDataset load_latency(const std::string& path, LatencyClusterMode mode) {
    auto in = open_or_throw(path);
    LatencyDataset data;
    data.mode = mode;

    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"source_id", "domain", "latency_ms"}) {
        throw std::runtime_error(path + ": expected header source_id,domain,latency_ms");
    }

    std::map<std::string, int> index;
    std::uint64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++data.report.rows_read;
        const auto fields = split_csv_line(line);
        double latency = 0.0;
        if (fields.size() != 3 || fields[0].empty() || !parse_double(fields[2], latency) || latency <= 0.0) {
            ++data.report.rows_dropped;
            data.report.row_errors.push_back("line " + std::to_string(line_no) + ": malformed row");
            continue;
        }
        auto [it, inserted] = index.try_emplace(fields[0], static_cast<int>(data.traces.size()));
        if (inserted) {
            data.source_ids.push_back(fields[0]);
            data.source_domains.push_back(fields[1]);
            data.traces.emplace_back();
        }
        data.traces[static_cast<std::size_t>(it->second)].push_back(latency);
    }

    // Sources that ended up with no valid observations are dropped.
    for (std::size_t s = 0; s < data.traces.size();) {
        if (data.traces[s].empty()) {
            data.report.warnings.push_back("source " + data.source_ids[s] + " dropped: empty trace");
            data.source_ids.erase(data.source_ids.begin() + static_cast<std::ptrdiff_t>(s));
            data.source_domains.erase(data.source_domains.begin() + static_cast<std::ptrdiff_t>(s));
            data.traces.erase(data.traces.begin() + static_cast<std::ptrdiff_t>(s));
        } else {
            ++s;
        }
    }
    if (data.traces.empty()) throw std::runtime_error(path + ": no usable rows");

    data.min_latency = data.max_latency = data.traces[0][0];
    for (const auto& tr : data.traces) {
        for (double v : tr) {
            data.min_latency = std::min(data.min_latency, v);
            data.max_latency = std::max(data.max_latency, v);
        }
    }
    if (!(data.max_latency > data.min_latency)) {
        throw std::runtime_error(path + ": degenerate latency range");
    }
    return data;
}

std::vector<std::vector<double>> gen_history_latency(const LatencyDataset& data, int history_size,
                                                     RngStream& rng) {
    if (history_size < 0) throw std::invalid_argument("gen_history_latency: negative history size");
    std::vector<std::uint64_t> offsets(1, 0);
    for (const auto& tr : data.traces) offsets.push_back(offsets.back() + tr.size());
    const std::uint64_t total = offsets.back();
    std::vector<std::vector<double>> history(data.traces.size());
    for (int i = 0; i < history_size; ++i) {
        const std::uint64_t pick = rng.below(total);
        const auto src = static_cast<std::size_t>(
            std::distance(offsets.begin(),
                          std::upper_bound(offsets.begin(), offsets.end(), pick)) - 1);
        const auto obs = static_cast<std::size_t>(pick - offsets[src]);
        history[src].push_back(data.normalize(data.traces[src][obs]));
    }
    return history;
}

LatencyReplayEnv::LatencyReplayEnv(const LatencyDataset& data)
    : map_(data.make_clusters()),
      cursor_(data.traces.size(), 0),
      min_latency_(data.min_latency),
      max_latency_(data.max_latency),
      mode_name_(data.mode == LatencyClusterMode::by_domain ? "domain" : "quintile") {
    rewards_.reserve(data.traces.size());
    means_.reserve(data.traces.size());
    for (const auto& tr : data.traces) {
        std::vector<double> rs;
        rs.reserve(tr.size());
        for (double v : tr) rs.push_back(data.normalize(v));
        means_.push_back(std::accumulate(rs.begin(), rs.end(), 0.0) / rs.size());
        rewards_.push_back(std::move(rs));
    }
}

void LatencyReplayEnv::reset_replay(RngStream& rng) {
    for (auto& rs : rewards_) rng.shuffle(rs);
    std::fill(cursor_.begin(), cursor_.end(), 0);
}

double LatencyReplayEnv::draw(ArmId arm, RngStream& rng) {
    auto& rs = rewards_.at(static_cast<std::size_t>(arm));
    auto& cur = cursor_[static_cast<std::size_t>(arm)];
    if (cur >= rs.size()) {
        rng.shuffle(rs);
        cur = 0;
    }
    return rs[cur++];
}

void LatencyReplayEnv::describe(nlohmann::json& out) const {
    out["kind"] = "latency";
    out["num_arms"] = num_arms();
    out["num_clusters"] = map_.num_clusters();
    out["cluster_mode"] = mode_name_;
    out["min_latency_ms"] = min_latency_;
    out["max_latency_ms"] = max_latency_;
    out["best_arm"] = best_arm();
    out["best_mean"] = best_mean();
}

// ---------------------------------------------------------------------------
// Dose
// ---------------------------------------------------------------------------

DoseDataset load_dose(const std::string& path) {
    auto in = open_or_throw(path);
    DoseDataset data;

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "label") {
        throw std::runtime_error(path + ": expected header f1,...,fd,label");
    }
    data.dim = static_cast<int>(header.size()) - 1;

    std::uint64_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++data.report.rows_read;
        const auto fields = split_csv_line(line);
        bool ok = fields.size() == header.size();
        Eigen::VectorXd x(data.dim);
        for (int i = 0; ok && i < data.dim; ++i) {
            ok = parse_double(fields[static_cast<std::size_t>(i)], x[i]);
        }
        int label = 0;
        ok = ok && parse_int(fields.back(), label) && label >= 1 && label <= kDoseFineClasses;
        if (!ok) {
            ++data.report.rows_dropped;
            data.report.row_errors.push_back("line " + std::to_string(line_no) + ": rejected row");
            continue;
        }
        data.features.push_back(std::move(x));
        data.labels.push_back(label);
    }
    if (data.labels.empty()) throw std::runtime_error(path + ": no usable rows");
    return data;
}

DoseReplayEnv::DoseReplayEnv(const DoseDataset& data, int history_size, RngStream& rng)
    : map_([] {
          std::vector<ClusterId> a(static_cast<std::size_t>(kDoseFineClasses));
          for (int k = 0; k < kDoseFineClasses; ++k) {
              a[static_cast<std::size_t>(k)] = dose_coarse_of(k + 1);
          }
          return ClusterMap(std::move(a), kDoseCoarseClasses);
      }()),
      dim_(data.dim),
      history_size_(history_size) {
    const int n = data.num_patients();
    if (history_size < 0 || history_size >= n) {
        throw std::invalid_argument("DoseReplayEnv: history_size must be in [0, patients)");
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    // Standardization constants come from the historical split only.
    mu_ = Eigen::VectorXd::Zero(dim_);
    scale_ = Eigen::VectorXd::Ones(dim_);
    if (history_size > 0) {
        for (int i = 0; i < history_size; ++i) {
            mu_ += data.features[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        }
        mu_ /= static_cast<double>(history_size);
        Eigen::VectorXd var = Eigen::VectorXd::Zero(dim_);
        for (int i = 0; i < history_size; ++i) {
            const auto& f = data.features[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
            var += (f - mu_).cwiseAbs2();
        }
        var /= static_cast<double>(history_size);
        scale_ = var.cwiseSqrt().cwiseMax(1e-12);
    }

    for (int i = 0; i < n; ++i) {
        const auto row = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
        if (i < history_size) {
            hist_x_.push_back(standardize(data.features[row]));
            hist_label_.push_back(data.labels[row]);
        } else {
            online_x_.push_back(standardize(data.features[row]));
            online_label_.push_back(data.labels[row]);
        }
    }
}

Eigen::VectorXd DoseReplayEnv::standardize(const Eigen::VectorXd& raw) const {
    return (raw - mu_).cwiseQuotient(scale_);
}

bool DoseReplayEnv::next_context(Eigen::VectorXd& x, RngStream&) {
    if (cursor_ >= online_x_.size()) return false;
    x = online_x_[cursor_];
    current_label_ = online_label_[cursor_];
    ++cursor_;
    return true;
}

double DoseReplayEnv::expected(ArmId arm, const Eigen::VectorXd&) const {
    if (current_label_ < 0) throw std::logic_error("DoseReplayEnv: no current context");
    return arm == current_label_ - 1 ? 1.0 : 0.0;
}

double DoseReplayEnv::draw(ArmId arm, const Eigen::VectorXd& x, RngStream&) {
    return expected(arm, x);
}

ContextualHistory DoseReplayEnv::make_history(RngStream& rng) const {
    ContextualHistory out;
    out.arm_seeds.assign(static_cast<std::size_t>(kDoseFineClasses), HistorySeed::empty(dim_));
    out.cluster_seeds.assign(static_cast<std::size_t>(kDoseCoarseClasses), HistorySeed::empty(dim_));
    for (std::size_t i = 0; i < hist_x_.size(); ++i) {
        const auto arm = static_cast<int>(rng.below(kDoseFineClasses));
        const double r = arm == hist_label_[i] - 1 ? 1.0 : 0.0;
        out.arm_seeds[static_cast<std::size_t>(arm)].add(hist_x_[i], r);
        out.cluster_seeds[static_cast<std::size_t>(dose_coarse_of(arm + 1))].add(hist_x_[i], r);
        ++out.total_records;
    }
    return out;
}

void DoseReplayEnv::describe(nlohmann::json& out) const {
    out["kind"] = "dose";
    out["num_arms"] = kDoseFineClasses;
    out["num_clusters"] = kDoseCoarseClasses;
    out["dim"] = dim_;
    out["history_size"] = history_size_;
    out["online_rounds"] = online_rounds();
    out["feature_means"] = std::vector<double>(mu_.data(), mu_.data() + mu_.size());
    out["feature_scales"] = std::vector<double>(scale_.data(), scale_.data() + scale_.size());
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

void write_latency_fixture(const std::string& path, const LatencyFixtureSpec& spec) {
    if (spec.sources <= 0 || spec.readings <= 0 || spec.domains < 2) {
        throw std::invalid_argument("write_latency_fixture: bad spec");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    RngStream rng(spec.seed, 7001);
    out << "source_id,domain,latency_ms\n";

    // Three tiers. Field sources form a tight mid band spread over all but
    // one domain. The remaining domain mixes very slow junk with the few star
    // (fastest) sources, and the star rows are written last: grouping by
    // average latency isolates the stars, while the domain grouping buries
    // them behind the junk.
    const int stars = std::max(1, static_cast<int>(std::lround(spec.sources * 0.03)));
    const int junk = std::max(2, static_cast<int>(std::lround(spec.sources * 0.13)));
    const int field = spec.sources - stars - junk;
    if (field < spec.domains - 1) {
        throw std::invalid_argument("write_latency_fixture: too few sources for domain count");
    }

    char buf[160];
    int next_id = 0;
    auto emit_source = [&](int domain, double mean_ms) {
        const int readings = std::max(
            1, spec.readings +
                   static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, spec.readings / 5)))) -
                   spec.readings / 10);
        for (int i = 0; i < readings; ++i) {
            const double latency = std::clamp(mean_ms + rng.normal(0.0, 0.08 * mean_ms), 5.0, 1500.0);
            std::snprintf(buf, sizeof(buf), "src%04d,dom%02d,%.3f\n", next_id, domain, latency);
            out << buf;
        }
        ++next_id;
    };

    for (int s = 0; s < junk; ++s) emit_source(0, rng.uniform(1350.0, 1450.0));
    for (int s = 0; s < field; ++s) {
        const int domain = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.domains - 1)));
        emit_source(domain, rng.uniform(430.0, 530.0));
    }
    for (int s = 0; s < stars; ++s) emit_source(0, rng.uniform(60.0, 80.0));
}

void write_dose_fixture(const std::string& path, const DoseFixtureSpec& spec) {
    if (spec.patients <= 0 || spec.features <= 0) {
        throw std::invalid_argument("write_dose_fixture: bad spec");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    RngStream rng(spec.seed, 7002);
    const int d = spec.features;

    auto random_direction = [&] {
        Eigen::VectorXd v(d);
        for (int i = 0; i < d; ++i) v[i] = rng.normal();
        return Eigen::VectorXd(v / v.norm());
    };
    std::vector<Eigen::VectorXd> fine_centroids;
    for (int coarse = 0; coarse < kDoseCoarseClasses; ++coarse) {
        const Eigen::VectorXd base = spec.coarse_radius * random_direction();
        for (int f = 0; f < kDoseFinePerCoarse; ++f) {
            fine_centroids.push_back(base + spec.fine_radius * random_direction());
        }
    }

    for (int i = 0; i < d; ++i) out << "f" << i + 1 << ",";
    out << "label\n";
    out << std::setprecision(8);
    for (int p = 0; p < spec.patients; ++p) {
        const int label = static_cast<int>(rng.below(kDoseFineClasses));
        const auto& c = fine_centroids[static_cast<std::size_t>(label)];
        for (int i = 0; i < d; ++i) {
            out << c[i] + rng.normal(0.0, spec.noise) << ",";
        }
        out << label + 1 << "\n";
    }
}

}  // namespace hcb
