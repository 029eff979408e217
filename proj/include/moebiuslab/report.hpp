#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "moebiuslab/classifier.hpp"

namespace moebiuslab {

inline constexpr const char* kToolName = "moebiuslab";
inline constexpr const char* kToolVersion = "1.0.0";

struct CheckResult {
    std::string name;
    double max = 0.0;
    double median = 0.0;
    double tol = 0.0;
    bool passed = false;

    bool operator==(const CheckResult&) const = default;
};

struct RunReport {
    std::string tool_version = kToolVersion;
    std::string command;
    std::string source;  ///< catalog name as given, or spec file path
    std::map<std::string, double> params;
    ClassificationReport classification;
    std::vector<CheckResult> checks;
    bool passed = false;
    int exit_code = 0;
    double wall_time_s = 0.0;  ///< NaN when timing is off; serialized as null

    bool operator==(const RunReport&) const;
};

nlohmann::ordered_json to_json(const RunReport& r);
RunReport run_report_from_json(const nlohmann::ordered_json& j);

/// Pretty JSON with fixed field order, floats at 17 significant digits and
/// non-finite numbers as null. Ends with a newline.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

std::string serialize(const RunReport& r);
/// Throws InvalidSpecFile on malformed input.
RunReport parse_report(const std::string& text);

}  // namespace moebiuslab
