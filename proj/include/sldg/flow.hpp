#pragma once

/// One-step characteristic maps x -> y_x(-dt), their inverses, breakpoints,
/// and the weighted branch families of the weak Euler and Platen schemes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sldg/errors.hpp"
#include "sldg/field.hpp"

namespace sldg {

/// x -> foot(x). `displacement_bound` bounds |foot(x) - x|; `slope`, when set,
/// is d foot / dx and speeds up forward_solve. `shift` is set exactly when
/// foot(x) = x - *shift.
struct BackwardMap {
    ScalarFn foot;
    ScalarFn slope;
    ScalarFn preimage_guess; ///< optional approximate inverse of foot, seeds forward_solve
    std::optional<double> shift;
    double dt = 0.0;
    double displacement_bound = 0.0;
    bool monotone = true;
};

struct Branch {
    double weight = 0.0;
    BackwardMap map;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// foot(x) = x - shift.
inline BackwardMap shift_map(double shift, double dt = 0.0)
{
    BackwardMap m;
    m.foot = [shift](double x) { return x - shift; };
    m.slope = [](double) { return 1.0; };
    m.preimage_guess = [shift](double z) { return z + shift; };
    m.shift = shift;
    m.dt = dt;
    m.displacement_bound = std::abs(shift);
    return m;
}

/// Exact backward flow of constant speed b: foot(x) = x - b dt.
inline BackwardMap constant_map(double b, double dt) { return shift_map(b * dt, dt); }

/// Closed-form backward flow: flow(x, dt) = y_x(-dt).
using AnalyticFlow = std::function<double(double x, double dt)>;

struct OdeMapOptions {
    double lipschitz = 1.0;   ///< bound on |b'|, sets the RK4 substep count
    double speed_bound = 1.0; ///< bound on |b|, sets the displacement bound
    int min_substeps = 4;
};

/// Backward characteristic of y' = b(y) over dt (dt may be negative: forward flow).
/// Uses `analytic` when given, otherwise classical RK4 with
/// max(min_substeps, ceil(20 L |dt|)) substeps.
inline BackwardMap ode_map(ScalarFn b, double dt, const OdeMapOptions& opt = {}, AnalyticFlow analytic = {})
{
    BackwardMap m;
    m.dt = dt;
    m.displacement_bound = opt.speed_bound * std::abs(dt);
    if (dt == 0.0) return shift_map(0.0);
    if (analytic) {
        m.foot = [analytic, dt](double x) { return analytic(x, dt); };
        return m;
    }
    const int substeps = std::max(opt.min_substeps,
                                  static_cast<int>(std::ceil(20.0 * opt.lipschitz * std::abs(dt))));
    const auto integrate = [b = std::move(b), substeps](double x, double h) {
        double y = x;
        for (int s = 0; s < substeps; ++s) {
            const double k1 = b(y);
            const double k2 = b(y + 0.5 * h * k1);
            const double k3 = b(y + 0.5 * h * k2);
            const double k4 = b(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return y;
    };
    const double h = -dt / substeps;
    m.foot = [integrate, h](double x) {
        const double y = integrate(x, h);
        if (!std::isfinite(y)) throw numerical_error("ode_map: non-finite characteristic");
        return y;
    };
    m.preimage_guess = [integrate, h](double z) { return integrate(z, -h); };
    return m;
}

/// foot'(x) = foot(x) + eps * eta(x); eta_bound bounds |eta|.
inline BackwardMap perturbed(BackwardMap base, double eps, ScalarFn eta, double eta_bound)
{
    BackwardMap m = base;
    m.foot = [f = std::move(base.foot), eps, eta = std::move(eta)](double x) { return f(x) + eps * eta(x); };
    m.slope = {};
    m.shift.reset();
    m.displacement_bound = base.displacement_bound + std::abs(eps) * eta_bound;
    return m;
}

/// Solves foot(x) = z for x in [lo, hi] (foot(lo) <= z <= foot(hi) required).
/// Newton (or secant when no slope is known) safeguarded by bisection.
inline double forward_solve(const BackwardMap& map, double z, double lo, double hi)
{
    double glo = map.foot(lo) - z;
    double ghi = map.foot(hi) - z;
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (glo > 0.0 || ghi < 0.0) {
        throw numerical_error("forward_solve: no sign change on bracket (map not monotone?) for z=" +
                              std::to_string(z));
    }
    const double tol = 1e-13 * std::max(1.0, std::abs(z));
    double x = lo - glo * (hi - lo) / (ghi - glo);
    if (map.preimage_guess) {
        const double guess = map.preimage_guess(z);
        if (guess > lo && guess < hi) x = guess;
    }
    double x_prev = lo;
    double g_prev = glo;
    double best_x = x;
    double best_g = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
        const double g = map.foot(x) - z;
        if (std::abs(g) < std::abs(best_g)) {
            best_g = g;
            best_x = x;
        }
        if (g == 0.0) return x;
        if (g < 0.0) lo = x; else hi = x;
        if (std::abs(g) <= 0.01 * tol || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
        double d = 0.0;
        if (map.slope) {
            d = map.slope(x);
        } else if (x != x_prev) {
            d = (g - g_prev) / (x - x_prev);
        }
        double next = (d > 0.0 && std::isfinite(d)) ? x - g / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x_prev = x;
        g_prev = g;
        x = next;
    }
    if (std::abs(best_g) > tol) {
        throw numerical_error("forward_solve: residual " + std::to_string(best_g) + " above tolerance");
    }
    return best_x;
}

/// Solves foot(x) = z on the bracket [z - bound, z + bound].
inline double forward_solve(const BackwardMap& map, double z)
{
    if (!map.monotone) throw config_error("forward_solve: map not flagged monotone");
    const double bound = map.displacement_bound * (1.0 + 1e-12) + 1e-14 * std::max(1.0, std::abs(z));
    return forward_solve(map, z, z - bound, z + bound);
}

namespace detail {

// Breakpoints of cell i given the feet of its end points. out receives
// x_{i-1/2}, interior points (sorted, merged within 1e-13 dx), x_{i+1/2}.
inline void cell_breakpoints(const BackwardMap& map, const Mesh1D& mesh, int i, double foot_left,
                             double foot_right, std::vector<double>& out)
{
    const double a = mesh.interface(i);
    const double b = mesh.interface(i + 1);
    const double merge = 1e-13 * mesh.dx();
    out.clear();
    out.push_back(a);
    if (foot_right > foot_left) {
        const long long first = static_cast<long long>(std::floor((foot_left - mesh.x_min()) / mesh.dx())) + 1;
        const long long last = static_cast<long long>(std::ceil((foot_right - mesh.x_min()) / mesh.dx())) - 1;
        for (long long l = first; l <= last; ++l) {
            const double z = mesh.interface(l);
            if (z <= foot_left || z >= foot_right) continue;
            const double x = forward_solve(map, z, a, b);
            if (x - out.back() > merge && b - x > merge) out.push_back(x);
        }
    }
    out.push_back(b);
}

} // namespace detail

/// Sorted points x_{i,0} = x_{i-1/2} < ... < x_{i,p+1} = x_{i+1/2}; the interior ones are
/// the preimages under foot of the mesh interfaces (periodically unwrapped).
inline std::vector<double> breakpoints(const BackwardMap& map, const Mesh1D& mesh, int i)
{
    if (!map.monotone) throw config_error("breakpoints: map not flagged monotone");
    std::vector<double> pts;
    detail::cell_breakpoints(map, mesh, i, map.foot(mesh.interface(i)), map.foot(mesh.interface(i + 1)), pts);
    return pts;
}

/// How branch constructors validate invertibility.
enum class InvertibilityCheck {
    /// the sufficient derivative bound must hold (estimated at 10^4 samples)
    sufficient,
    /// when the sufficient bound fails, accept maps whose sampled feet still increase
    sampled,
};

struct BranchOptions {
    Interval domain{0.0, 1.0};
    InvertibilityCheck check = InvertibilityCheck::sufficient;
    int samples = 10000;
    double safety = 0.95;
    ScalarFn db;     ///< optional analytic b'
    ScalarFn dsigma; ///< optional analytic sigma'
};

namespace detail {

struct SampledBounds {
    double b_max = 0.0;
    double sigma_max = 0.0;
    double db_max = 0.0;
    double dsigma_max = 0.0;
    double euler_slope = 0.0; // max |dt b' +- sqrt(dt) sigma'|
};

inline double central_difference(const ScalarFn& f, double x, double scale)
{
    const double h = 1e-6 * std::max(1.0, scale);
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline SampledBounds sample_bounds(const ScalarFn& b, const ScalarFn& sigma, double dt, const BranchOptions& opt)
{
    SampledBounds s;
    const double scale = opt.domain.hi - opt.domain.lo;
    const double sq = std::sqrt(dt);
    for (int j = 0; j < opt.samples; ++j) {
        const double x = opt.domain.lo + scale * (j + 0.5) / opt.samples;
        const double bx = b(x);
        const double sx = sigma(x);
        const double dbx = opt.db ? opt.db(x) : central_difference(b, x, scale);
        const double dsx = opt.dsigma ? opt.dsigma(x) : central_difference(sigma, x, scale);
        if (!std::isfinite(bx) || !std::isfinite(sx) || !std::isfinite(dbx) || !std::isfinite(dsx)) {
            throw numerical_error("branch construction: non-finite coefficient at x=" + std::to_string(x));
        }
        s.b_max = std::max(s.b_max, std::abs(bx));
        s.sigma_max = std::max(s.sigma_max, std::abs(sx));
        s.db_max = std::max(s.db_max, std::abs(dbx));
        s.dsigma_max = std::max(s.dsigma_max, std::abs(dsx));
        s.euler_slope = std::max({s.euler_slope, std::abs(dt * dbx + sq * dsx), std::abs(dt * dbx - sq * dsx)});
    }
    return s;
}

inline bool sampled_increasing(const ScalarFn& foot, const BranchOptions& opt)
{
    const double scale = opt.domain.hi - opt.domain.lo;
    const int n = 4 * opt.samples;
    double prev = foot(opt.domain.lo - 0.01 * scale);
    for (int j = 0; j <= n; ++j) {
        const double x = opt.domain.lo + scale * (-0.01 + 1.02 * j / n);
        const double f = foot(x);
        if (f < prev) return false;
        prev = f;
    }
    return true;
}

inline void check_branches(const std::vector<Branch>& branches, bool sufficient_ok, double estimate,
                           const char* bound_name, const BranchOptions& opt)
{
    if (sufficient_ok) return;
    if (opt.check == InvertibilityCheck::sampled) {
        bool ok = true;
        for (const auto& br : branches) ok = ok && sampled_increasing(br.map.foot, opt);
        if (ok) return;
    }
    throw config_error(std::string("invertibility bound violated: ") + bound_name + " = " +
                       std::to_string(estimate) + " (must stay below " + std::to_string(opt.safety) + ")");
}

} // namespace detail

/// Weak Euler branches q = -1, +1 (weights 1/2): foot = x + b(x) dt + q sigma(x) sqrt(dt).
inline std::vector<Branch> euler_branches(const ScalarFn& b, const ScalarFn& sigma, double dt,
                                          const BranchOptions& opt = {})
{
    if (dt < 0.0) throw config_error("euler_branches: dt must be >= 0");
    const auto s = detail::sample_bounds(b, sigma, dt, opt);
    const double sq = std::sqrt(dt);
    std::vector<Branch> out;
    for (int q : {-1, 1}) {
        Branch br;
        br.weight = 0.5;
        br.map.dt = dt;
        br.map.displacement_bound = 1.05 * (s.b_max * dt + s.sigma_max * sq) + 1e-14;
        br.map.foot = [b, sigma, dt, sq, q](double x) { return x + b(x) * dt + q * sigma(x) * sq; };
        out.push_back(std::move(br));
    }
    detail::check_branches(out, s.euler_slope < opt.safety, s.euler_slope, "||dt b' +- sqrt(dt) sigma'||", opt);
    return out;
}

/// Platen's derivative-free second-order weak scheme, branches q = -1, 0, +1 with
/// weights 1/6, 2/3, 1/6.
inline std::vector<Branch> platen_branches(const ScalarFn& b, const ScalarFn& sigma, double dt,
                                           const BranchOptions& opt = {})
{
    if (dt < 0.0) throw config_error("platen_branches: dt must be >= 0");
    const auto s = detail::sample_bounds(b, sigma, dt, opt);
    const double sq = std::sqrt(dt);
    const double sqrt3 = std::sqrt(3.0);
    const double weights[3] = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
    std::vector<Branch> out;
    for (int q = -1; q <= 1; ++q) {
        Branch br;
        br.weight = weights[q + 1];
        br.map.dt = dt;
        br.map.displacement_bound = 1.05 * (s.b_max * dt + (sqrt3 + 1.0) * s.sigma_max * sq) + 1e-14;
        br.map.foot = [b, sigma, dt, sq, sqrt3, q](double x) {
            const double bx = b(x);
            const double sx = sigma(x);
            const auto gamma = [&](double c) { return x + bx * dt + c * sx * sq; };
            const double s_plus = sigma(gamma(1.0));
            const double s_minus = sigma(gamma(-1.0));
            return x + 0.5 * (b(gamma(sqrt3 * q)) + bx) * dt +
                   0.25 * ((s_plus + s_minus + 2.0 * sx) * sqrt3 * q + (s_plus - s_minus) * (3.0 * q * q - 1.0)) * sq;
        };
        out.push_back(std::move(br));
    }
    const double estimate = dt * s.db_max + 3.0 * sq * s.dsigma_max;
    detail::check_branches(out, estimate < opt.safety, estimate, "dt ||b'|| + 3 sqrt(dt) ||sigma'||", opt);
    return out;
}

} // namespace sldg
