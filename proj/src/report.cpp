#include "homog/report.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace homog {

InequalityReport make_report(std::string name, double lhs, double rhs, double constant_used,
                             std::string constant_provenance, std::string orientation,
                             double err_estimate, std::map<std::string, std::string> metadata) {
    InequalityReport rep;
    rep.name = std::move(name);
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.constant_used = constant_used;
    rep.constant_provenance = std::move(constant_provenance);
    rep.orientation = std::move(orientation);
    rep.err_estimate = err_estimate;
    rep.metadata = std::move(metadata);

    const double bounded = rep.orientation == "rhs/lhs" ? rhs : lhs;
    const double bounding = rep.orientation == "rhs/lhs" ? lhs : rhs;
    if (std::abs(lhs) < 1e-14 && std::abs(rhs) < 1e-14) {
        rep.status = IneqStatus::degenerate;
        rep.ratio = 0.0;
        return rep;
    }
    rep.ratio = bounding != 0.0 ? bounded / bounding
                                : std::numeric_limits<double>::infinity();
    rep.status = rep.ratio > 1.0 + err_estimate ? IneqStatus::violated : IneqStatus::holds;
    return rep;
}

nlohmann::json InequalityReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["constant"] = constant_used;
    j["constant_provenance"] = constant_provenance;
    j["ratio"] = std::isfinite(ratio) ? nlohmann::json(ratio) : nlohmann::json("inf");
    j["orientation"] = orientation;
    j["status"] = to_string(status);
    j["err_estimate"] = err_estimate;
    if (!metadata.empty()) j["metadata"] = metadata;
    return j;
}

} // namespace homog
