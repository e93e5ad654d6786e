#pragma once

/// Registry of the reproduction experiments: PDE data, exact solutions and the
/// time-stepping pipeline of each scheme.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "sldg/diffusion.hpp"
#include "sldg/errors.hpp"
#include "sldg/field.hpp"
#include "sldg/flow.hpp"
#include "sldg/harness/config.hpp"
#include "sldg/harness/manufactured.hpp"
#include "sldg/split2d.hpp"
#include "sldg/transport.hpp"

namespace sldg::harness {

struct ExampleInfo {
    std::string id;
    std::string title;
    int dimension = 1;
    double final_time = 1.0;
    std::vector<std::string> schemes; ///< first entry is the default
    int default_k = 1;
    std::function<ConvergenceRow(const ExperimentConfig&)> run;
};

namespace problems {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---- non-constant 1D advection: v_t + (C0 + C1 sin 2 pi x) v_x = 0 on (0,1)

inline constexpr double adv_c0 = 1.0;
inline constexpr double adv_c1 = 0.8;

inline double advection_speed(double x) { return adv_c0 + adv_c1 * std::sin(two_pi * x); }

/// y_x(-t) for y' = C0 + C1 sin(2 pi y). With s = tan(pi y) the ODE becomes
/// s' = pi C0 ((s + r)^2 + a^2); the branches of atan/tan are lifted so the map is
/// continuous and increasing on the whole line.
inline double advection_foot(double x, double t)
{
    const double r = adv_c1 / adv_c0;
    const double a = std::sqrt(1.0 - r * r);
    const double theta = pi * x;
    const double m = std::round(theta / pi);
    const double phi = m * pi + std::atan((std::tan(theta - m * pi) + r) / a);
    const double psi = phi - adv_c0 * pi * a * t;
    const double m2 = std::floor((psi + 0.5 * pi) / pi);
    return (m2 * pi + std::atan(a * std::tan(psi - m2 * pi) - r)) / pi;
}

// ---- 2D bump used by rotation and deformation

inline double bump(double x, double y)
{
    const double r0 = 0.25;
    return 1.0 - std::exp(-20.0 * ((x - 1.0) * (x - 1.0) + y * y - r0 * r0));
}

// ---- Black-Scholes put in log variables

struct PutData {
    double K = 100.0;
    double r = 0.10;
    double sigma = 0.2;
};

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// European put value at time-to-maturity t, spot K e^x.
inline double put_price(const PutData& p, double t, double x)
{
    if (t <= 0.0) return p.K * std::max(1.0 - std::exp(x), 0.0);
    const double st = p.sigma * std::sqrt(t);
    const double d1 = (x + (p.r + 0.5 * p.sigma * p.sigma) * t) / st;
    const double d2 = d1 - st;
    return p.K * std::exp(-p.r * t) * norm_cdf(-d2) - p.K * std::exp(x) * norm_cdf(-d1);
}

} // namespace problems

namespace detail {

using clock = std::chrono::steady_clock;

inline double seconds_since(clock::time_point start)
{
    return std::chrono::duration<double>(clock::now() - start).count();
}

inline int steps_from_cfl(double cfl, double T, double speed, double dx)
{
    if (!(cfl > 0.0)) throw config_error("cfl must be > 0");
    const double dt = cfl * dx / speed;
    return std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
}

inline void require_scheme(const std::string& scheme, const std::vector<std::string>& allowed, const std::string& id)
{
    if (std::find(allowed.begin(), allowed.end(), scheme) == allowed.end()) {
        std::string list;
        for (const auto& s : allowed) list += (list.empty() ? "" : ", ") + s;
        throw config_error("scheme '" + scheme + "' not available for " + id + " (choose from: " + list + ")");
    }
}

inline int sldg_order(const std::string& scheme)
{
    if (scheme == "sldg-1") return 1;
    if (scheme == "sldg-2") return 2;
    if (scheme == "sldg-3") return 3;
    throw config_error("scheme '" + scheme + "' is not an sldg-p scheme");
}

inline ConvergenceRow row_from(const ExperimentConfig& c, int N, const Norms& e, double seconds, double cfl)
{
    ConvergenceRow r;
    r.M = c.M;
    r.M2 = c.M2 > 0 ? c.M2 : c.M;
    r.N = N;
    r.l1 = e.l1;
    r.l2 = e.l2;
    r.linf = e.linf;
    r.l1_nodes = e.l1_nodes;
    r.seconds = seconds;
    r.cfl = cfl;
    return r;
}

// ---- runners

inline ConvergenceRow run_advection_1d(const ExperimentConfig& c, double T, bool variable)
{
    const Mesh1D mesh(0.0, 1.0, c.M, Boundary::periodic);
    const double speed = variable ? problems::adv_c0 + problems::adv_c1 : 1.0;
    const int N = c.cfl ? steps_from_cfl(*c.cfl, T, speed, mesh.dx()) : c.N;
    const double dt = T / N;
    const ScalarFn u0 = [](double x) { return std::sin(problems::two_pi * x); };
    BackwardMap map = variable
        ? ode_map(problems::advection_speed, dt, {problems::two_pi * problems::adv_c1, speed, 4},
                  problems::advection_foot)
        : constant_map(1.0, dt);
    const SpaceTimeFn exact = variable
        ? SpaceTimeFn([](double t, double x) { return std::sin(problems::two_pi * problems::advection_foot(x, t)); })
        : SpaceTimeFn([](double t, double x) { return std::sin(problems::two_pi * (x - t)); });
    const std::string scheme = c.scheme;
    DgField1D u = project(u0, mesh, c.k);
    const auto start = clock::now();
    for (int n = 0; n < N; ++n) u = scheme == "direct" ? direct_step(u, map) : advect_step(u, map);
    const double secs = seconds_since(start);
    return row_from(c, N, error_vs(u, exact, T, c.l2_rule), secs, speed * dt / mesh.dx());
}

inline ConvergenceRow run_convection_diffusion(const ExperimentConfig& c, double T)
{
    const double sigma = 0.1;
    const double b = 0.3;
    const Mesh1D mesh(0.0, 1.0, c.M, Boundary::periodic);
    const int N = c.N;
    const double dt = T / N;
    const int p = sldg_order(c.scheme);
    const ScalarFn u0 = [](double x) {
        return std::cos(problems::two_pi * x) + 0.5 * std::cos(2.0 * problems::two_pi * x);
    };
    const SpaceTimeFn exact = [=](double t, double x) {
        double v = 0.0;
        for (int k = 1; k <= 2; ++k) {
            const double ck = k == 1 ? 1.0 : 0.5;
            v += ck * std::exp(-2.0 * sigma * sigma * k * k * problems::pi * problems::pi * t) *
                 std::cos(problems::two_pi * k * (x - b * t));
        }
        return v;
    };
    const BackwardMap drift = constant_map(b, dt);
    DgField1D u = project(u0, mesh, c.k);
    const auto start = clock::now();
    for (int n = 0; n < N; ++n) u = sldg_const(advect_step(u, drift), sigma, dt, p, nullptr, 0.0, c.single_projection);
    const double secs = seconds_since(start);
    return row_from(c, N, error_vs(u, exact, T, c.l2_rule), secs, b * dt / mesh.dx());
}

inline ConvergenceRow run_black_scholes(const ExperimentConfig& c, double T)
{
    const problems::PutData put;
    const double b = -(put.r - 0.5 * put.sigma * put.sigma);
    const Mesh1D mesh(-2.0, 2.0, c.M, Boundary::extended);
    const int N = c.N;
    const double dt = T / N;
    const int p = sldg_order(c.scheme);
    BoundaryExtension ext;
    ext.left = [put](double t, double x) { return put.K * std::exp(-put.r * t) - put.K * std::exp(x); };
    ext.right = [](double, double) { return 0.0; };
    const BackwardMap drift = constant_map(b, dt);
    const BoundaryExtension moved_ext = transported_extension(ext, drift);
    DgField1D u = project([&](double x) { return problems::put_price(put, 0.0, x); }, mesh, c.k);
    const auto start = clock::now();
    for (int n = 0; n < N; ++n) {
        const double t = n * dt;
        const DgField1D v = advect_step(u, drift, &ext, t);
        u = discount(sldg_const(v, put.sigma, dt, p, &moved_ext, t, c.single_projection), put.r, dt);
    }
    const double secs = seconds_since(start);
    const SpaceTimeFn exact = [put](double t, double x) { return problems::put_price(put, t, x); };
    return row_from(c, N, error_vs(u, exact, T, c.l2_rule), secs, std::abs(b) * dt / mesh.dx());
}

inline ConvergenceRow run_variable_sigma(const ExperimentConfig& c, double T)
{
    const Mesh1D mesh(0.0, 1.0, c.M, Boundary::periodic);
    const int N = c.N;
    const double dt = T / N;
    const int order = c.scheme == "sldg-1" ? 1 : 2;
    CoeffSet1D coeffs;
    coeffs.sigma = [](double x) { return std::sin(problems::two_pi * x); };
    coeffs.dsigma = [](double x) { return problems::two_pi * std::cos(problems::two_pi * x); };
    coeffs.db = [](double) { return 0.0; };
    SourceSpec src;
    src.f = manufactured::variable_sigma_f;
    src.f_t = manufactured::variable_sigma_f_t;
    src.f_x = manufactured::variable_sigma_f_x;
    src.f_xx = manufactured::variable_sigma_f_xx;
    const InvertibilityCheck check = c.invertibility.value_or(InvertibilityCheck::sampled);
    DgField1D u(mesh, c.k);
    const auto start = clock::now();
    for (int n = 0; n < N; ++n) {
        const double t = n * dt;
        u = source_correct(weak_step(u, coeffs, dt, order, nullptr, t, check), src, coeffs, t, dt, order);
    }
    const double secs = seconds_since(start);
    const SpaceTimeFn exact = [](double t, double x) {
        return std::sin(problems::two_pi * t) * std::cos(problems::two_pi * (x - t));
    };
    return row_from(c, N, error_vs(u, exact, T, c.l2_rule), secs, std::nan(""));
}

inline SplitKind split_kind_of(const std::string& scheme)
{
    const auto k = parse_split_kind(scheme);
    if (!k) throw config_error("unknown splitting '" + scheme + "'");
    return *k;
}

inline Mesh2D square_mesh(const ExperimentConfig& c, double lo, double hi)
{
    return {Mesh1D(lo, hi, c.M, Boundary::periodic), Mesh1D(lo, hi, c.M2 > 0 ? c.M2 : c.M, Boundary::periodic)};
}

inline ConvergenceRow run_rotation(const ExperimentConfig& c, double T)
{
    const Mesh2D mesh = square_mesh(c, -2.0, 2.0);
    const int N = c.N;
    const double dt = T / N;
    const SplitSchedule sched = schedule(split_kind_of(c.scheme));
    // b = 2 pi (-y, x): along x the speed is -2 pi y, along y it is 2 pi x
    const DirectionalFlow flow = [](int axis, double tr, double tau) {
        const double speed = axis == 1 ? -problems::two_pi * tr : problems::two_pi * tr;
        return constant_map(speed, tau);
    };
    DgField2D u = project2d(problems::bump, mesh, c.k);
    const auto start = clock::now();
    for (int n = 0; n < N; ++n) u = split_advect(u, flow, dt, sched);
    const double secs = seconds_since(start);
    const SpaceTimeFn2 exact = [](double t, double x, double y) {
        const double a = -problems::two_pi * t;
        return problems::bump(std::cos(a) * x - std::sin(a) * y, std::sin(a) * x + std::cos(a) * y);
    };
    const double dx = std::min(mesh.x.dx(), mesh.y.dx());
    return row_from(c, N, error_vs(u, exact, T, c.l2_rule), secs, problems::two_pi * 2.0 * dt / dx);
}

inline ConvergenceRow run_deformation(const ExperimentConfig& c, double T)
{
    const Mesh2D mesh = square_mesh(c, -2.0, 2.0);
    const int N = c.N;
    if (N % 2 != 0) throw config_error("deformation example needs an even step count N (g flips at T/2)");
    const double dt = T / N;
    const SplitSchedule sched = schedule(split_kind_of(c.scheme));
    OdeMapOptions opt;
    opt.lipschitz = 2.0;
    opt.speed_bound = 1.0;
    opt.min_substeps = c.ode_substeps > 0 ? c.ode_substeps : 4;
    DgField2D u = project2d(problems::bump, mesh, c.k);
    const auto start = clock::now();
    for (int n = 0; n < N; ++n) {
        const double g = n < N / 2 ? 1.0 : -1.0;
        const DirectionalFlow flow = [g, &opt](int axis, double tr, double tau) {
            if (axis == 1) {
                const double s = -g * std::sin(tr);
                return ode_map([s](double x) { return s * std::cos(0.5 * x * x); }, tau, opt);
            }
            const double s = g * std::sin(tr);
            return ode_map([s](double y) { return s * std::cos(0.5 * y * y); }, tau, opt);
        };
        u = split_advect(u, flow, dt, sched);
    }
    const double secs = seconds_since(start);
    const SpaceTimeFn2 exact = [](double, double x, double y) { return problems::bump(x, y); };
    const double dx = std::min(mesh.x.dx(), mesh.y.dx());
    return row_from(c, N, error_vs(u, exact, T, c.l2_rule), secs, dt / dx);
}

inline ConvergenceRow run_constant_diffusion_2d(const ExperimentConfig& c, double T)
{
    const Mesh2D mesh = square_mesh(c, 0.0, 1.0);
    const int N = c.N;
    const double dt = T / N;
    const int p = sldg_order(c.scheme);
    const auto profile = [](int i, double t, double xi) {
        double v = 0.0;
        for (int q = 1; q <= 2; ++q) {
            const double w = problems::two_pi * q;
            v += 1.0 / (i + q) * std::exp(-w * w * t / 2.0) * std::cos(w * xi);
        }
        return v;
    };
    const SpaceTimeFn2 exact = [profile](double t, double x, double y) {
        return profile(1, t, x + 2.0 * y) + profile(2, t, -y);
    };
    DgField2D u = project2d([&](double x, double y) { return exact(0.0, x, y); }, mesh, c.k);
    const auto start = clock::now();
    for (int n = 0; n < N; ++n) {
        u = sldg_const_2d(u, 1.0, 0.0, dt, p);
        u = sldg_const_2d(u, 2.0, -1.0, dt, p);
    }
    const double secs = seconds_since(start);
    return row_from(c, N, error_vs(u, exact, T, c.l2_rule), secs, std::nan(""));
}

inline MatrixField2D variable_sigma_2d()
{
    MatrixField2D s;
    s.entries = [](double x, double y) {
        return std::array<double, 4>{std::cos(x), std::cos(2.0 * x), 0.0, std::sin(y)};
    };
    s.depends = {Dependence::x, Dependence::x, Dependence::none, Dependence::y};
    return s;
}

inline ConvergenceRow run_variable_diffusion_2d(const ExperimentConfig& c, double T)
{
    const Mesh2D mesh = square_mesh(c, -problems::pi, problems::pi);
    const int N = c.N;
    const double dt = T / N;
    const bool platen = c.scheme == "platen-strang";
    const int order = platen ? 2 : 1;
    const MatrixField2D sigma = variable_sigma_2d();
    const auto dirs = decompose_diffusion(sigma);
    const InvertibilityCheck check = c.invertibility.value_or(InvertibilityCheck::sampled);
    SourceSpec2D src;
    src.f = manufactured::variable_2d_f;
    src.f_t = manufactured::variable_2d_f_t;
    src.f_x = manufactured::variable_2d_f_x;
    src.f_y = manufactured::variable_2d_f_y;
    src.f_xx = manufactured::variable_2d_f_xx;
    src.f_xy = manufactured::variable_2d_f_xy;
    src.f_yy = manufactured::variable_2d_f_yy;
    const SpaceTimeFn2 exact = [](double t, double x, double y) {
        return std::cos(t) * std::sin(2.0 * x) * std::sin(x + y);
    };
    const SplitSchedule sched = schedule(platen ? SplitKind::strang : SplitKind::trotter);
    DgField2D u = project2d([&](double x, double y) { return exact(0.0, x, y); }, mesh, c.k);
    const auto start = clock::now();
    for (int n = 0; n < N; ++n) {
        const double t = n * dt;
        for (const auto& st : sched.stages) u = weak_step_2d(u, dirs[st.axis - 1], {}, st.theta * dt, order, check);
        u = source_correct_2d(u, src, sigma, t, dt, order);
    }
    const double secs = seconds_since(start);
    return row_from(c, N, error_vs(u, exact, T, c.l2_rule), secs, std::nan(""));
}

} // namespace detail

/// All registered experiments.
inline const std::vector<ExampleInfo>& registry()
{
    static const std::vector<ExampleInfo> table = [] {
        std::vector<ExampleInfo> t;
        const auto T_of = [](const ExperimentConfig& c, double def) { return c.final_time.value_or(def); };
        t.push_back({"ex2", "1D advection, b = 1 + 0.8 sin(2 pi x), periodic (0,1)", 1, 1.0, {"sldg", "direct"}, 1,
                     [T_of](const ExperimentConfig& c) { return detail::run_advection_1d(c, T_of(c, 1.0), true); }});
        t.push_back({"appA", "1D advection v_t + v_x = 0, direct vs SLDG stability", 1, 1.0, {"direct", "sldg"}, 1,
                     [T_of](const ExperimentConfig& c) { return detail::run_advection_1d(c, T_of(c, 1.0), false); }});
        t.push_back({"ex4", "2D rotation b = 2 pi (-y, x) on (-2,2)^2", 2, 0.9,
                     {"strang", "trotter", "ruth3", "forest4", "yoshida6"}, 2,
                     [T_of](const ExperimentConfig& c) { return detail::run_rotation(c, T_of(c, 0.9)); }});
        t.push_back({"ex5", "2D deformation with sign flip at T/2 on (-2,2)^2", 2, 1.0,
                     {"strang", "trotter", "ruth3", "forest4", "yoshida6"}, 2,
                     [T_of](const ExperimentConfig& c) { return detail::run_deformation(c, T_of(c, 1.0)); }});
        t.push_back({"ex6", "1D convection-diffusion, sigma = 0.1, b = 0.3", 1, 0.2, {"sldg-3", "sldg-1", "sldg-2"}, 3,
                     [T_of](const ExperimentConfig& c) { return detail::run_convection_diffusion(c, T_of(c, 0.2)); }});
        t.push_back({"ex7bs", "1D Black-Scholes European put in log variables", 1, 0.25, {"sldg-3", "sldg-1", "sldg-2"},
                     4, [T_of](const ExperimentConfig& c) { return detail::run_black_scholes(c, T_of(c, 0.25)); }});
        t.push_back({"exsev", "1D diffusion with sigma = sin(2 pi x) and manufactured source", 1, 1.0,
                     {"sldg-2", "sldg-1"}, 2,
                     [T_of](const ExperimentConfig& c) { return detail::run_variable_sigma(c, T_of(c, 1.0)); }});
        t.push_back({"ex9", "2D constant anisotropic diffusion on (0,1)^2", 2, 0.2, {"sldg-3", "sldg-1", "sldg-2"}, 3,
                     [T_of](const ExperimentConfig& c) { return detail::run_constant_diffusion_2d(c, T_of(c, 0.2)); }});
        t.push_back({"ex10", "2D variable diffusion with manufactured source on (-pi,pi)^2", 2, 1.0,
                     {"platen-strang", "euler-trotter"}, 2,
                     [T_of](const ExperimentConfig& c) { return detail::run_variable_diffusion_2d(c, T_of(c, 1.0)); }});
        return t;
    }();
    return table;
}

inline const ExampleInfo& find_example(const std::string& id)
{
    for (const auto& e : registry()) {
        if (e.id == id) return e;
    }
    std::string list;
    for (const auto& e : registry()) list += (list.empty() ? "" : ", ") + e.id;
    throw config_error("unknown example '" + id + "' (registered: " + list + ")");
}

} // namespace sldg::harness
