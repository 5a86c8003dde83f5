#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "cohortdiff/combine.hpp"
#include "cohortdiff/curves.hpp"
#include "cohortdiff/resampling.hpp"

namespace cohortdiff {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportVersion = 1;

// FNV-1a over raw bytes; stable across platforms, used to fingerprint
// resolved configs and input files inside reports.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(const std::string& bytes);

nlohmann::json curve_to_json(const CumulativeCurve& curve);

nlohmann::json profile_to_json(const DiurnalProfile& profile);

// Background-normalized ratios; undefined bins serialize as null.
nlohmann::json ratios_to_json(const std::vector<std::optional<double>>& ratios);

// Null summary for violin rendering: either the compact quantile form
// (min, 0.1%, 1%, 5%, 25%, 50%, 75%, 95%, 99%, 99.9%, max) or full samples.
nlohmann::json null_to_json(const NullDistribution& null, bool full_samples);

nlohmann::json empirical_p_to_json(const EmpiricalP& raw, const EmpiricalP& smoothed);

nlohmann::json combined_to_json(const CombinedTestResult& result);

// Wraps a report body with format/version/tool fields, the resolved config,
// and the config hash. The config must already exclude execution-resource
// settings (thread count, file paths) so equal analyses hash equally.
nlohmann::json make_report(const std::string& command, const nlohmann::json& config,
                           nlohmann::json body);

std::string dump_report(const nlohmann::json& report);

} // namespace cohortdiff
