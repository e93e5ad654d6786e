#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sldg/errors.hpp"
#include "sldg/field.hpp"
#include "sldg/flow.hpp"

namespace sldg::harness {

/// One experiment run. M2 = 0 means M2 = M. When `cfl` is set, N is derived from
/// it as the smallest step count with ||b|| dt / dx <= cfl.
struct ExperimentConfig {
    std::string example = "ex2";
    int k = 1;
    int M = 20;
    int M2 = 0;
    int N = 20;
    std::string scheme; ///< empty: the example's default
    std::optional<double> cfl;
    std::optional<double> final_time;
    L2Rule l2_rule = L2Rule::nodal;
    bool parallel = false;
    int ode_substeps = 0; ///< 0: example default
    bool single_projection = false;
    std::optional<InvertibilityCheck> invertibility;
};

struct ConvergenceRow {
    int M = 0;
    int M2 = 0;
    int N = 0;
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double l1_nodes = 0.0;
    double order_l2 = std::numeric_limits<double>::quiet_NaN(); ///< NaN on the first row
    double seconds = 0.0;
    double cfl = std::numeric_limits<double>::quiet_NaN();
};

inline std::string to_string(L2Rule r) { return r == L2Rule::nodal ? "nodal" : "oversampled"; }
inline std::string to_string(InvertibilityCheck c)
{
    return c == InvertibilityCheck::sufficient ? "sufficient" : "sampled";
}

inline L2Rule parse_l2_rule(const std::string& s)
{
    if (s == "nodal") return L2Rule::nodal;
    if (s == "oversampled") return L2Rule::oversampled;
    throw config_error("unknown l2 rule '" + s + "' (expected nodal or oversampled)");
}

inline InvertibilityCheck parse_invertibility(const std::string& s)
{
    if (s == "sufficient") return InvertibilityCheck::sufficient;
    if (s == "sampled") return InvertibilityCheck::sampled;
    throw config_error("unknown invertibility check '" + s + "' (expected sufficient or sampled)");
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& c)
{
    j = nlohmann::json{{"example", c.example},
                       {"k", c.k},
                       {"M", c.M},
                       {"M2", c.M2},
                       {"N", c.N},
                       {"scheme", c.scheme},
                       {"l2_rule", to_string(c.l2_rule)},
                       {"parallel", c.parallel},
                       {"ode_substeps", c.ode_substeps},
                       {"single_projection", c.single_projection}};
    if (c.cfl) j["cfl"] = *c.cfl;
    if (c.final_time) j["final_time"] = *c.final_time;
    if (c.invertibility) j["invertibility"] = to_string(*c.invertibility);
}

/// Reads the fields present in j; absent fields keep their current value.
inline void from_json(const nlohmann::json& j, ExperimentConfig& c)
{
    if (!j.is_object()) throw config_error("config: JSON object expected");
    static const char* known[] = {"example", "k", "M", "M2", "N", "scheme", "cfl", "final_time", "l2_rule",
                                  "parallel", "ode_substeps", "single_projection", "invertibility"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw config_error("config: unknown field '" + it.key() + "'");
    }
    try {
        if (j.contains("example")) c.example = j.at("example").get<std::string>();
        if (j.contains("k")) c.k = j.at("k").get<int>();
        if (j.contains("M")) c.M = j.at("M").get<int>();
        if (j.contains("M2")) c.M2 = j.at("M2").get<int>();
        if (j.contains("N")) c.N = j.at("N").get<int>();
        if (j.contains("scheme")) c.scheme = j.at("scheme").get<std::string>();
        if (j.contains("cfl")) c.cfl = j.at("cfl").get<double>();
        if (j.contains("final_time")) c.final_time = j.at("final_time").get<double>();
        if (j.contains("l2_rule")) c.l2_rule = parse_l2_rule(j.at("l2_rule").get<std::string>());
        if (j.contains("parallel")) c.parallel = j.at("parallel").get<bool>();
        if (j.contains("ode_substeps")) c.ode_substeps = j.at("ode_substeps").get<int>();
        if (j.contains("single_projection")) c.single_projection = j.at("single_projection").get<bool>();
        if (j.contains("invertibility")) c.invertibility = parse_invertibility(j.at("invertibility").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
}

inline void to_json(nlohmann::json& j, const ConvergenceRow& r)
{
    j = nlohmann::json{{"M", r.M}, {"M2", r.M2}, {"N", r.N}, {"l1", r.l1}, {"l2", r.l2}, {"linf", r.linf},
                       {"l1_nodes", r.l1_nodes}, {"seconds", r.seconds}};
    j["order_l2"] = std::isnan(r.order_l2) ? nlohmann::json(nullptr) : nlohmann::json(r.order_l2);
    j["cfl"] = std::isnan(r.cfl) ? nlohmann::json(nullptr) : nlohmann::json(r.cfl);
}

inline void from_json(const nlohmann::json& j, ConvergenceRow& r)
{
    r.M = j.at("M").get<int>();
    r.M2 = j.at("M2").get<int>();
    r.N = j.at("N").get<int>();
    r.l1 = j.at("l1").get<double>();
    r.l2 = j.at("l2").get<double>();
    r.linf = j.at("linf").get<double>();
    r.l1_nodes = j.at("l1_nodes").get<double>();
    r.seconds = j.at("seconds").get<double>();
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    r.order_l2 = j.at("order_l2").is_null() ? nan : j.at("order_l2").get<double>();
    r.cfl = j.at("cfl").is_null() ? nan : j.at("cfl").get<double>();
}

} // namespace sldg::harness
