#include "cohortdiff/report.hpp"

#include <algorithm>
#include <cstdio>

#include "cohortdiff/stats.hpp"

namespace cohortdiff {

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

nlohmann::json curve_to_json(const CumulativeCurve& curve) {
    nlohmann::json j;
    j["t_max_hours"] = curve.t_max();
    j["total_events"] = curve.total_events();
    j["jump_times"] = curve.jump_times();
    nlohmann::json sizes = nlohmann::json::array();
    for (std::size_t i = 0; i < curve.jump_times().size(); ++i) sizes.push_back(curve.jump_size(i));
    j["jump_sizes"] = std::move(sizes);
    return j;
}

nlohmann::json profile_to_json(const DiurnalProfile& profile) {
    nlohmann::json j;
    j["bin_width_hours"] = profile.bin_width;
    j["t_max_hours"] = profile.t_max;
    j["counts"] = profile.counts;
    return j;
}

nlohmann::json ratios_to_json(const std::vector<std::optional<double>>& ratios) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : ratios) {
        if (r)
            j.push_back(*r);
        else
            j.push_back(nullptr);
    }
    return j;
}

nlohmann::json null_to_json(const NullDistribution& null, bool full_samples) {
    nlohmann::json j;
    j["model"] = to_string(null.model);
    j["seed"] = null.seed;
    j["replicates"] = null.replicates;
    j["redraws"] = null.redraws;
    j["observed_hours"] = null.observed;
    j["t_max_hours"] = null.t_max;
    if (full_samples) {
        j["samples"] = null.samples;
    } else {
        std::vector<double> sorted(null.samples);
        std::sort(sorted.begin(), sorted.end());
        static constexpr std::pair<const char*, double> kQuantiles[] = {
            {"min", 0.0},   {"p0_1", 0.001}, {"p1", 0.01},  {"p5", 0.05},
            {"p25", 0.25},  {"p50", 0.5},    {"p75", 0.75}, {"p95", 0.95},
            {"p99", 0.99},  {"p99_9", 0.999}, {"max", 1.0},
        };
        nlohmann::json q;
        for (const auto& [name, prob] : kQuantiles) q[name] = quantile_sorted(sorted, prob);
        j["quantiles"] = std::move(q);
    }
    return j;
}

nlohmann::json empirical_p_to_json(const EmpiricalP& raw, const EmpiricalP& smoothed) {
    nlohmann::json j;
    j["raw"] = raw.p;
    j["smoothed"] = smoothed.p;
    j["count_ge"] = raw.count_ge;
    j["replicates"] = raw.replicates;
    return j;
}

nlohmann::json combined_to_json(const CombinedTestResult& result) {
    nlohmann::json j;
    j["inputs"] = result.inputs;
    j["transform"] = to_string(result.transform);
    j["tail"] = to_string(result.tail);
    j["t_statistic"] = result.t_statistic;
    j["dof"] = result.dof;
    j["p_combined"] = result.p_combined;
    return j;
}

nlohmann::json make_report(const std::string& command, const nlohmann::json& config,
                           nlohmann::json body) {
    nlohmann::json j = std::move(body);
    j["format"] = "cohortdiff-report";
    j["version"] = kReportVersion;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    j["config_hash"] = hash_hex(config.dump());
    return j;
}

std::string dump_report(const nlohmann::json& report) { return report.dump(2) + "\n"; }

} // namespace cohortdiff
