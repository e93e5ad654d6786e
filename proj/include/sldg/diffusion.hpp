#pragma once

/// 1D second-order steps: the constant-sigma shift average and its SLDG-p
/// combinations, variable-coefficient weak Euler / Platen steps, the
/// Feynman-Kac source correction and discounting.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sldg/errors.hpp"
#include "sldg/field.hpp"
#include "sldg/flow.hpp"
#include "sldg/transport.hpp"

namespace sldg {

/// Coefficients of u_t - sigma(x)^2/2 u_xx - b(x) u_x + r u = f.
struct CoeffSet1D {
    ScalarFn b = [](double) { return 0.0; };
    ScalarFn sigma = [](double) { return 0.0; };
    double r = 0.0;
    ScalarFn db;     ///< optional b'
    ScalarFn dsigma; ///< optional sigma'

    static CoeffSet1D constant(double b, double sigma, double r = 0.0)
    {
        CoeffSet1D c;
        c.b = [b](double) { return b; };
        c.sigma = [sigma](double) { return sigma; };
        c.db = [](double) { return 0.0; };
        c.dsigma = [](double) { return 0.0; };
        c.r = r;
        return c;
    }
};

/// Right-hand side f(t, x) and, for the second-order correction, f_t, f_x, f_xx.
struct SourceSpec {
    SpaceTimeFn f;
    SpaceTimeFn f_t;
    SpaceTimeFn f_x;
    SpaceTimeFn f_xx;
};

/// sum_j c_j F_j for any field type exposing compatible(), coeffs() and a
/// copy constructor.
template <class Field>
Field weighted_sum(std::initializer_list<std::pair<double, const Field*>> terms)
{
    if (terms.size() == 0) throw config_error("weighted_sum: no terms");
    const Field& first = *terms.begin()->second;
    Field out = first;
    auto& dst = out.coeffs();
    std::fill(dst.begin(), dst.end(), 0.0);
    for (const auto& [c, f] : terms) {
        if (!f->compatible(first)) throw config_error("weighted_sum: incompatible fields");
        const auto& src = f->coeffs();
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += c * src[j];
    }
    return out;
}

/// SLDG-p combination of an averaging operator S:
/// p=1: S u;  p=2: (u + Su + S^2 u)/3;  p=3: (13u + 21Su + 9S^2u + 2S^3u)/45.
/// S is called with (field, application index 0..p-1).
template <class Field, class Op>
Field sldg_combine(const Field& u, Op&& S, int p)
{
    switch (p) {
    case 1: return S(u, 0);
    case 2: {
        const Field s1 = S(u, 0);
        const Field s2 = S(s1, 1);
        return weighted_sum<Field>({{1.0 / 3.0, &u}, {1.0 / 3.0, &s1}, {1.0 / 3.0, &s2}});
    }
    case 3: {
        const Field s1 = S(u, 0);
        const Field s2 = S(s1, 1);
        const Field s3 = S(s2, 2);
        return weighted_sum<Field>(
            {{13.0 / 45.0, &u}, {21.0 / 45.0, &s1}, {9.0 / 45.0, &s2}, {2.0 / 45.0, &s3}});
    }
    default: throw config_error("sldg_combine: p must be 1, 2 or 3, got " + std::to_string(p));
    }
}

/// Extension of x -> (E(x - s) + E(x + s)) / 2.
inline BoundaryExtension averaged_extension(const BoundaryExtension& ext, double s)
{
    BoundaryExtension out;
    const auto avg = [s](SpaceTimeFn e) {
        return [e = std::move(e), s](double t, double x) { return 0.5 * (e(t, x - s) + e(t, x + s)); };
    };
    out.left = avg(ext.left);
    out.right = avg(ext.right);
    return out;
}

/// Pi of (u(x - sigma sqrt(dt)) + u(x + sigma sqrt(dt))) / 2, each shift transported exactly.
inline DgField1D shift_average(const DgField1D& u, double sigma, double dt, const BoundaryExtension* ext = nullptr,
                               double t = 0.0)
{
    if (sigma < 0.0 || dt < 0.0) throw config_error("shift_average: sigma and dt must be >= 0");
    const double s = sigma * std::sqrt(dt);
    if (s == 0.0) return u;
    const DgField1D minus = advect_step(u, shift_map(s), ext, t);
    const DgField1D plus = advect_step(u, shift_map(-s), ext, t);
    return lincomb({{0.5, &minus}, {0.5, &plus}});
}

/// SLDG-p step for constant sigma. With single_projection the shifts are
/// combined before one projection (binomial weights of the shift powers).
inline DgField1D sldg_const(const DgField1D& u, double sigma, double dt, int p, const BoundaryExtension* ext = nullptr,
                            double t = 0.0, bool single_projection = false)
{
    if (p < 1 || p > 3) throw config_error("sldg_const: p must be 1, 2 or 3, got " + std::to_string(p));
    const double s = sigma * std::sqrt(dt);
    if (!single_projection) {
        std::vector<std::optional<BoundaryExtension>> exts(3);
        if (ext != nullptr) {
            exts[0] = *ext;
            exts[1] = averaged_extension(*exts[0], s);
            exts[2] = averaged_extension(*exts[1], s);
        }
        return sldg_combine(
            u,
            [&](const DgField1D& v, int j) {
                return shift_average(v, sigma, dt, exts[j] ? &*exts[j] : nullptr, t);
            },
            p);
    }
    // weight of (S0)^m in the SLDG-p combination, m = 0..3
    static const double power_weight[3][4] = {
        {0.0, 1.0, 0.0, 0.0}, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0}, {13.0 / 45.0, 21.0 / 45.0, 9.0 / 45.0, 2.0 / 45.0}};
    // (S0)^m = 2^-m sum_j binom(m, j) T_{(2j - m) s}; index j + 3 holds the weight of the shift j*s
    std::vector<double> shift_weight(7, 0.0);
    for (int m = 0; m <= p; ++m) {
        double binom = 1.0;
        for (int j = 0; j <= m; ++j) {
            shift_weight[2 * j - m + 3] += power_weight[p - 1][m] * binom / std::ldexp(1.0, m);
            binom = binom * (m - j) / (j + 1);
        }
    }
    DgField1D out(u.mesh(), u.degree());
    for (int j = -3; j <= 3; ++j) {
        const double w = shift_weight[j + 3];
        if (w == 0.0) continue;
        const DgField1D moved = (j == 0) ? u : advect_step(u, shift_map(j * s), ext, t);
        const auto& src = moved.coeffs();
        auto& dst = out.coeffs();
        for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += w * src[q];
    }
    return out;
}

/// One fully discrete weak-scheme step for variable b, sigma (no discounting, no source):
/// sum_q alpha_q * advect_step(u, branch_q). Each branch uses its own breakpoints.
inline DgField1D weak_step(const DgField1D& u, const CoeffSet1D& coeffs, double dt, int order,
                           const BoundaryExtension* ext = nullptr, double t = 0.0,
                           InvertibilityCheck check = InvertibilityCheck::sufficient)
{
    if (dt < 0.0) throw config_error("weak_step: negative time step (diffusion is not reversible)");
    BranchOptions opt;
    opt.domain = {u.mesh().x_min(), u.mesh().x_max()};
    opt.check = check;
    opt.db = coeffs.db;
    opt.dsigma = coeffs.dsigma;
    std::vector<Branch> branches;
    if (order == 1) {
        branches = euler_branches(coeffs.b, coeffs.sigma, dt, opt);
    } else if (order == 2) {
        branches = platen_branches(coeffs.b, coeffs.sigma, dt, opt);
    } else {
        throw config_error("weak_step: order must be 1 or 2, got " + std::to_string(order));
    }
    DgField1D out(u.mesh(), u.degree());
    auto& dst = out.coeffs();
    for (const auto& br : branches) {
        const DgField1D moved = advect_step(u, br.map, ext, t);
        const auto& src = moved.coeffs();
        for (std::size_t q = 0; q < dst.size(); ++q) dst[q] += br.weight * src[q];
    }
    return out;
}

/// Adds h f(t_n, x) (order 1) or h f + h^2/2 (A f + f_t) (order 2) at every node,
/// A f = sigma^2/2 f_xx + b f_x - r f.
inline DgField1D source_correct(const DgField1D& u, const SourceSpec& src, const CoeffSet1D& coeffs, double t_n,
                                double dt, int order)
{
    if (order != 1 && order != 2) throw config_error("source_correct: order must be 1 or 2");
    if (!src.f) throw config_error("source_correct: source f missing");
    if (order == 2 && (!src.f_t || !src.f_x || !src.f_xx)) {
        throw config_error("source_correct: order 2 needs f_t, f_x and f_xx");
    }
    DgField1D out = u;
    for (int i = 0; i < u.mesh().cells(); ++i) {
        for (int a = 0; a < u.nodes_per_cell(); ++a) {
            const double x = u.node(i, a);
            const double f = src.f(t_n, x);
            double add = dt * f;
            if (order == 2) {
                const double s = coeffs.sigma(x);
                const double af = 0.5 * s * s * src.f_xx(t_n, x) + coeffs.b(x) * src.f_x(t_n, x) - coeffs.r * f;
                add += 0.5 * dt * dt * (af + src.f_t(t_n, x));
            }
            out(i, a) += add;
        }
    }
    require_finite(out, "source_correct");
    return out;
}

/// e^{-r dt} u.
inline DgField1D discount(const DgField1D& u, double r, double dt)
{
    DgField1D out = u;
    const double f = std::exp(-r * dt);
    for (double& v : out.coeffs()) v *= f;
    return out;
}

} // namespace sldg
