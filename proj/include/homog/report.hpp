// Inequality check results. Ratios, not absolute verdicts, are the primary
// output: "violated" requires the orientation-normalized ratio to exceed 1
// by more than the recorded discretization-error estimate, so quadrature
// error cannot manufacture counterexamples to theorems.
#pragma once

#include <map>
#include <string>

#include <json.hpp>

namespace homog {

enum class IneqStatus { holds, violated, degenerate };

inline const char* to_string(IneqStatus s) {
    switch (s) {
    case IneqStatus::holds: return "holds";
    case IneqStatus::violated: return "violated";
    case IneqStatus::degenerate: return "degenerate";
    }
    return "?";
}

struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant_used = 0.0;
    std::string constant_provenance; // "paper-sharp" | "empirical"
    double ratio = 0.0;              // bounded side / bounding side (<= 1 means holds)
    std::string orientation;         // "lhs/rhs" | "rhs/lhs"
    IneqStatus status = IneqStatus::holds;
    double err_estimate = 0.0;
    std::map<std::string, std::string> metadata;

    nlohmann::json to_json() const;
};

// Applies the status rules: degenerate iff both sides below 1e-14 in
// magnitude, violated iff ratio > 1 + err_estimate.
InequalityReport make_report(std::string name, double lhs, double rhs, double constant_used,
                             std::string constant_provenance, std::string orientation,
                             double err_estimate,
                             std::map<std::string, std::string> metadata = {});

} // namespace homog
