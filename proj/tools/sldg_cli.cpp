#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sldg/harness/config.hpp"
#include "sldg/harness/examples.hpp"
#include "sldg/harness/report.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::optional<std::string> example;
    std::optional<int> k, M, M2, N, ode_substeps;
    std::optional<std::string> scheme, l2_rule, invertibility;
    std::optional<double> cfl, final_time;
    bool parallel = false;
    bool single_projection = false;
    std::string out;
    std::string format = "md";
    int levels = 4;
};

void add_common(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config_path, "JSON file with ExperimentConfig fields (flags override it)");
    cmd->add_option("--example", f.example, "experiment id (see `list`)");
    cmd->add_option("--k", f.k, "polynomial degree");
    cmd->add_option("--M", f.M, "cells along x");
    cmd->add_option("--M2", f.M2, "cells along y (2D; default M)");
    cmd->add_option("--N", f.N, "time steps");
    cmd->add_option("--scheme", f.scheme, "scheme name (see `list`)");
    cmd->add_option("--cfl", f.cfl, "derive N from this CFL number (advection examples)");
    cmd->add_option("--T", f.final_time, "final time override");
    cmd->add_option("--l2-rule", f.l2_rule, "nodal or oversampled");
    cmd->add_option("--invertibility", f.invertibility, "sufficient or sampled");
    cmd->add_option("--ode-substeps", f.ode_substeps, "minimum RK4 substeps for numerically integrated flows");
    cmd->add_flag("--single-projection", f.single_projection, "combine constant-sigma shifts before projecting");
    cmd->add_flag("--parallel", f.parallel, "parallel per-cell loops (worker cap: SLDG_THREADS)");
    cmd->add_option("--out", f.out, "write the table here instead of stdout");
    cmd->add_option("--format", f.format, "csv, md or json")->check(CLI::IsMember({"csv", "md", "json"}));
}

sldg::harness::ExperimentConfig build_config(const Flags& f)
{
    using namespace sldg::harness;
    ExperimentConfig c;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw sldg::config_error("cannot open config file '" + f.config_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw sldg::config_error(std::string("config file: ") + e.what());
        }
        from_json(j, c);
    }
    if (f.example) c.example = *f.example;
    if (f.k) c.k = *f.k;
    if (f.M) c.M = *f.M;
    if (f.M2) c.M2 = *f.M2;
    if (f.N) c.N = *f.N;
    if (f.scheme) c.scheme = *f.scheme;
    if (f.cfl) c.cfl = *f.cfl;
    if (f.final_time) c.final_time = *f.final_time;
    if (f.l2_rule) c.l2_rule = parse_l2_rule(*f.l2_rule);
    if (f.invertibility) c.invertibility = parse_invertibility(*f.invertibility);
    if (f.ode_substeps) c.ode_substeps = *f.ode_substeps;
    if (f.parallel) c.parallel = true;
    if (f.single_projection) c.single_projection = true;
    return c;
}

void write_rows(const Flags& f, const std::vector<sldg::harness::ConvergenceRow>& rows)
{
    const auto format = sldg::harness::parse_format(f.format);
    if (f.out.empty()) {
        sldg::harness::emit(rows, format, std::cout);
        return;
    }
    std::ofstream os(f.out);
    if (!os) throw sldg::config_error("cannot open output file '" + f.out + "'");
    sldg::harness::emit(rows, format, os);
    if (!os) throw std::runtime_error("write to '" + f.out + "' failed");
}

void list_examples()
{
    for (const auto& e : sldg::harness::registry()) {
        std::string schemes;
        for (const auto& s : e.schemes) schemes += (schemes.empty() ? "" : ", ") + s;
        std::printf("%-6s %dD  T=%-5g k=%d  schemes: %s\n        %s\n", e.id.c_str(), e.dimension, e.final_time,
                    e.default_k, schemes.c_str(), e.title.c_str());
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Semi-Lagrangian DG convergence studies"};
    app.require_subcommand(1);
    Flags f;
    auto* run_cmd = app.add_subcommand("run", "run one configuration and print its error row");
    add_common(run_cmd, f);
    auto* conv_cmd = app.add_subcommand("convergence", "run a doubling sequence of M and N");
    add_common(conv_cmd, f);
    conv_cmd->add_option("--levels", f.levels, "number of refinement levels (>= 2)")->check(CLI::Range(2, 64));
    auto* list_cmd = app.add_subcommand("list", "list registered experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list_cmd->parsed()) {
            list_examples();
            return 0;
        }
        const auto config = build_config(f);
        std::vector<sldg::harness::ConvergenceRow> rows;
        if (run_cmd->parsed()) {
            rows.push_back(sldg::harness::run(config));
        } else {
            rows = sldg::harness::convergence(config, f.levels);
        }
        if (config.parallel) std::fprintf(stderr, "note: timings taken with parallel loops\n");
        write_rows(f, rows);
        return 0;
    } catch (const sldg::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const sldg::numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
