#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sldg/errors.hpp"
#include "sldg/harness/config.hpp"
#include "sldg/harness/examples.hpp"
#include "sldg/parallel.hpp"

namespace sldg::harness {

/// Fills in the default scheme and checks the parameters against the example.
inline ExperimentConfig resolved(ExperimentConfig c)
{
    const ExampleInfo& info = find_example(c.example);
    if (c.scheme.empty()) c.scheme = info.schemes.front();
    detail::require_scheme(c.scheme, info.schemes, info.id);
    if (c.k < 0 || c.k > max_gauss_points - 1) {
        throw config_error("k must be in [0, " + std::to_string(max_gauss_points - 1) + "]");
    }
    if (c.M < 1) throw config_error("M must be >= 1");
    if (c.M2 < 0) throw config_error("M2 must be >= 0");
    if (c.N < 1 && !c.cfl) throw config_error("N must be >= 1");
    if (c.final_time && !(*c.final_time > 0.0)) throw config_error("final_time must be > 0");
    if (c.ode_substeps < 0) throw config_error("ode_substeps must be >= 0");
    return c;
}

/// Runs one configuration. Only the time loop is timed.
inline ConvergenceRow run(const ExperimentConfig& config)
{
    const ExperimentConfig c = resolved(config);
    const int previous = thread_count();
    set_thread_count(c.parallel ? thread_cap() : 1);
    try {
        ConvergenceRow row = find_example(c.example).run(c);
        set_thread_count(previous);
        return row;
    } catch (...) {
        set_thread_count(previous);
        throw;
    }
}

/// log(e_prev / e_cur) / log(refinement), the refinement being the ratio of N, or of M
/// when N did not change. NaN when neither changed.
inline double observed_order(const ConvergenceRow& prev, const ConvergenceRow& cur)
{
    const double ratio = cur.N != prev.N ? static_cast<double>(cur.N) / prev.N : static_cast<double>(cur.M) / prev.M;
    if (ratio == 1.0) return std::numeric_limits<double>::quiet_NaN();
    return std::log(prev.l2 / cur.l2) / std::log(ratio);
}

/// Runs `levels` refinements doubling M (and M2) and N from the base configuration.
/// With `cfl` set N follows M.
inline std::vector<ConvergenceRow> convergence(const ExperimentConfig& base, int levels)
{
    if (levels < 2) throw config_error("levels must be >= 2");
    std::vector<ConvergenceRow> rows;
    ExperimentConfig c = base;
    for (int l = 0; l < levels; ++l) {
        ConvergenceRow r = run(c);
        if (!rows.empty()) r.order_l2 = observed_order(rows.back(), r);
        rows.push_back(r);
        c.M *= 2;
        if (c.M2 > 0) c.M2 *= 2;
        c.N *= 2;
    }
    return rows;
}

enum class Format { csv, md, json };

inline Format parse_format(const std::string& s)
{
    if (s == "csv") return Format::csv;
    if (s == "md") return Format::md;
    if (s == "json") return Format::json;
    throw config_error("unknown format '" + s + "' (expected csv, md or json)");
}

namespace detail {

inline std::string fmt(const char* spec, double v)
{
    if (std::isnan(v)) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace detail

inline void emit(const std::vector<ConvergenceRow>& rows, Format format, std::ostream& os)
{
    switch (format) {
    case Format::json: {
        os << nlohmann::json(rows).dump(2) << '\n';
        return;
    }
    case Format::csv: {
        os << "M,M2,N,l1,l2,linf,l1_nodes,order_l2,seconds,cfl\n";
        for (const auto& r : rows) {
            os << r.M << ',' << r.M2 << ',' << r.N << ',' << detail::fmt("%.17g", r.l1) << ','
               << detail::fmt("%.17g", r.l2) << ',' << detail::fmt("%.17g", r.linf) << ',' << detail::fmt("%.17g", r.l1_nodes) << ','
               << (std::isnan(r.order_l2) ? "" : detail::fmt("%.6f", r.order_l2)) << ','
               << detail::fmt("%.6f", r.seconds) << ',' << (std::isnan(r.cfl) ? "" : detail::fmt("%.6g", r.cfl))
               << '\n';
        }
        return;
    }
    case Format::md: {
        os << "| M | N | L1 | L2 | Linf | L1 (nodes) | order | time (s) |\n";
        os << "|---|---|---|---|---|---|---|---|\n";
        for (const auto& r : rows) {
            os << "| " << r.M << (r.M2 != r.M ? "x" + std::to_string(r.M2) : "") << " | " << r.N << " | "
               << detail::fmt("%.2E", r.l1) << " | " << detail::fmt("%.2E", r.l2) << " | "
               << detail::fmt("%.2E", r.linf) << " | " << detail::fmt("%.2E", r.l1_nodes) << " | "
               << detail::fmt("%.2f", r.order_l2) << " | "
               << detail::fmt("%.2f", r.seconds) << " |\n";
        }
        return;
    }
    }
}

} // namespace sldg::harness
