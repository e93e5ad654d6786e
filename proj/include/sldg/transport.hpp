#pragma once

/// One-step semi-Lagrangian transport of a DG field along a backward map:
/// the weak-form (conservative) update and the direct (nodal) variant.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "sldg/errors.hpp"
#include "sldg/field.hpp"
#include "sldg/flow.hpp"
#include "sldg/parallel.hpp"

namespace sldg {

namespace detail {

// Value of u at the foot y, given the (unwrapped) cell index l that contains y.
inline double source_value(const DgField1D& u, long long l, double y, double t, const BoundaryExtension* ext)
{
    const Mesh1D& m = u.mesh();
    const long long M = m.cells();
    if (m.periodic()) {
        const long long wrapped = ((l % M) + M) % M;
        const double base = m.interface(l);
        const double s = 2.0 * (y - base) / m.dx() - 1.0;
        return lagrange_eval(u.rule(), u.cell(static_cast<int>(wrapped)), s);
    }
    if (l >= 0 && l < M) return u.eval_in_cell(static_cast<int>(l), y);
    if (ext == nullptr) {
        throw config_error("transport: characteristic foot " + std::to_string(y) +
                           " leaves the extended mesh and no extension was given");
    }
    return l < 0 ? ext->left(t, y) : ext->right(t, y);
}

// One cell of the weak-form update with breakpoints from the interface feet.
inline void advect_cell(const DgField1D& u, const BackwardMap& map, const BoundaryExtension* ext, double t, int i,
                        double foot_left, double foot_right, std::span<double> c)
{
    const Mesh1D& m = u.mesh();
    const int n = u.nodes_per_cell();
    const GaussRule& rule = u.rule();
    thread_local std::vector<double> pts;
    std::array<double, max_gauss_points> acc{};
    std::array<double, max_gauss_points> phi{};
    cell_breakpoints(map, m, i, foot_left, foot_right, pts);
    for (std::size_t q = 0; q + 1 < pts.size(); ++q) {
        const double half = 0.5 * (pts[q + 1] - pts[q]);
        if (!(half > 0.0)) continue;
        const double mid = 0.5 * (pts[q] + pts[q + 1]);
        const long long l = static_cast<long long>(std::floor((map.foot(mid) - m.x_min()) / m.dx()));
        for (int a = 0; a < n; ++a) {
            const double x = mid + rule.nodes[a] * half;
            const double w = rule.weights[a] * half;
            const double val = source_value(u, l, map.foot(x), t, ext);
            lagrange_basis_all(rule, u.reference(i, x), std::span<double>(phi.data(), n));
            for (int b = 0; b < n; ++b) acc[b] += w * val * phi[b];
        }
    }
    for (int b = 0; b < n; ++b) c[b] = acc[b] / u.weight(b);
}

// For foot(x) = x - s the update is out_i = A u_{i+L} + B u_{i+L+1}, the same
// matrices for every cell.
struct ShiftStencil {
    long long offset = 0; // L
    std::array<double, max_gauss_points * max_gauss_points> A{};
    std::array<double, max_gauss_points * max_gauss_points> B{};
    bool uses_a = true;
    bool uses_b = true;
};

inline ShiftStencil shift_stencil(const GaussRule& rule, double s_over_dx)
{
    const int n = rule.n;
    ShiftStencil st;
    st.offset = static_cast<long long>(std::floor(-s_over_dx));
    double rho = static_cast<double>(st.offset) + 1.0 + s_over_dx;
    if (rho >= 1.0 - 1e-13) rho = 1.0;
    if (rho <= 1e-13) rho = 0.0;
    st.uses_a = rho > 0.0;
    st.uses_b = rho < 1.0;
    std::array<double, max_gauss_points> phi_dst{};
    std::array<double, max_gauss_points> phi_src{};
    const auto fill = [&](std::array<double, max_gauss_points * max_gauss_points>& mat, double lo, double hi,
                          double src_shift) {
        const double len = hi - lo;
        if (len <= 0.0) return;
        for (int a = 0; a < n; ++a) {
            const double off = lo + 0.5 * (1.0 + rule.nodes[a]) * len;
            const double w = rule.weights[a] * len;
            lagrange_basis_all(rule, 2.0 * off - 1.0, std::span<double>(phi_dst.data(), n));
            lagrange_basis_all(rule, 2.0 * (off - s_over_dx - src_shift) - 1.0, std::span<double>(phi_src.data(), n));
            for (int b = 0; b < n; ++b) {
                for (int g = 0; g < n; ++g) mat[b * n + g] += w * phi_dst[b] * phi_src[g] / rule.weights[b];
            }
        }
    };
    fill(st.A, 0.0, rho, static_cast<double>(st.offset));
    fill(st.B, rho, 1.0, static_cast<double>(st.offset) + 1.0);
    return st;
}

} // namespace detail

/// u^{n+1} defined by (u^{n+1}, psi)_{I_i} = sum over subintervals of the Gauss rule
/// applied to u^n(foot(x)) psi(x). The source cell of each subinterval is the one
/// containing the foot of its midpoint. `t` is passed to the extension.
inline DgField1D advect_step(const DgField1D& u, const BackwardMap& map, const BoundaryExtension* ext = nullptr,
                             double t = 0.0)
{
    if (!map.monotone) throw config_error("advect_step: map not flagged monotone");
    const Mesh1D& m = u.mesh();
    const int M = m.cells();
    const int n = u.nodes_per_cell();
    DgField1D out(m, u.degree());

    if (map.shift) {
        if (*map.shift == 0.0) return u;
        const auto st = detail::shift_stencil(u.rule(), *map.shift / m.dx());
        parallel_for(M, [&](int i) {
            const long long la = i + st.offset;
            const long long lb = la + 1;
            auto c = out.cell(i);
            if (!m.periodic() && ((st.uses_a && (la < 0 || la >= M)) || (st.uses_b && (lb < 0 || lb >= M)))) {
                detail::advect_cell(u, map, ext, t, i, map.foot(m.interface(i)), map.foot(m.interface(i + 1)), c);
                return;
            }
            const auto wrap = [M](long long l) { return static_cast<int>(((l % M) + M) % M); };
            for (int b = 0; b < n; ++b) c[b] = 0.0;
            if (st.uses_a) {
                const auto src = u.cell(wrap(la));
                for (int b = 0; b < n; ++b) {
                    for (int g = 0; g < n; ++g) c[b] += st.A[b * n + g] * src[g];
                }
            }
            if (st.uses_b) {
                const auto src = u.cell(wrap(lb));
                for (int b = 0; b < n; ++b) {
                    for (int g = 0; g < n; ++g) c[b] += st.B[b * n + g] * src[g];
                }
            }
        });
        require_finite(out, "advect_step");
        return out;
    }

    std::vector<double> feet(static_cast<std::size_t>(M) + 1);
    for (int i = 0; i <= M; ++i) feet[i] = map.foot(m.interface(i));
    parallel_for(M, [&](int i) { detail::advect_cell(u, map, ext, t, i, feet[i], feet[i + 1], out.cell(i)); });
    require_finite(out, "advect_step");
    return out;
}

/// Nodal variant: u^{n+1}(x_alpha^i) = u^n(foot(x_alpha^i)). Not conservative.
inline DgField1D direct_step(const DgField1D& u, const BackwardMap& map, const BoundaryExtension* ext = nullptr,
                             double t = 0.0)
{
    DgField1D out(u.mesh(), u.degree());
    parallel_for(u.mesh().cells(), [&](int i) {
        for (int a = 0; a < u.nodes_per_cell(); ++a) out(i, a) = eval(u, map.foot(u.node(i, a)), t, ext);
    });
    require_finite(out, "direct_step");
    return out;
}

/// Extension of the transported field: x -> E(t, foot(x)).
inline BoundaryExtension transported_extension(const BoundaryExtension& ext, const BackwardMap& map)
{
    BoundaryExtension out;
    out.left = [l = ext.left, f = map.foot](double t, double x) { return l(t, f(x)); };
    out.right = [r = ext.right, f = map.foot](double t, double x) { return r(t, f(x)); };
    return out;
}

} // namespace sldg
