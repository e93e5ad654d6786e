#pragma once

/// Tensor-product Q_k fields on 2D meshes, line-by-line application of 1D
/// steps, splitting schedules and direction-wise 2D diffusion steps.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sldg/diffusion.hpp"
#include "sldg/errors.hpp"
#include "sldg/field.hpp"
#include "sldg/flow.hpp"
#include "sldg/parallel.hpp"
#include "sldg/transport.hpp"

namespace sldg {

using Fn2 = std::function<double(double x, double y)>;
/// f(t, x, y)
using SpaceTimeFn2 = std::function<double(double t, double x, double y)>;

struct Mesh2D {
    Mesh1D x;
    Mesh1D y;
    friend bool operator==(const Mesh2D&, const Mesh2D&) = default;
};

/// Nodal Q_k field. Coefficient (i, j, a, b) is the value at (x_a^i, y_b^j),
/// stored at ((i*M2 + j)*(k+1) + a)*(k+1) + b.
class DgField2D {
public:
    DgField2D(const Mesh2D& mesh, int degree)
        : mesh_(mesh), degree_(degree), rule_(&rule_for(degree)),
          coeffs_(static_cast<std::size_t>(mesh.x.cells()) * mesh.y.cells() * (degree + 1) * (degree + 1), 0.0)
    {
    }

    const Mesh2D& mesh() const { return mesh_; }
    int degree() const { return degree_; }
    int nodes_per_cell() const { return degree_ + 1; }
    const GaussRule& rule() const { return *rule_; }

    std::size_t index(int i, int j, int a, int b) const
    {
        const std::size_t n = degree_ + 1;
        return ((static_cast<std::size_t>(i) * mesh_.y.cells() + j) * n + a) * n + b;
    }
    double& operator()(int i, int j, int a, int b) { return coeffs_[index(i, j, a, b)]; }
    double operator()(int i, int j, int a, int b) const { return coeffs_[index(i, j, a, b)]; }

    std::vector<double>& coeffs() { return coeffs_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    double node_x(int i, int a) const { return mesh_.x.interface(i) + 0.5 * (1.0 + rule_->nodes[a]) * mesh_.x.dx(); }
    double node_y(int j, int b) const { return mesh_.y.interface(j) + 0.5 * (1.0 + rule_->nodes[b]) * mesh_.y.dx(); }

    /// Cell polynomial at (x, y).
    double eval_in_cell(int i, int j, double x, double y) const
    {
        const int n = degree_ + 1;
        std::array<double, max_gauss_points> px{};
        std::array<double, max_gauss_points> py{};
        lagrange_basis_all(*rule_, 2.0 * (x - mesh_.x.interface(i)) / mesh_.x.dx() - 1.0, std::span<double>(px.data(), n));
        lagrange_basis_all(*rule_, 2.0 * (y - mesh_.y.interface(j)) / mesh_.y.dx() - 1.0, std::span<double>(py.data(), n));
        const double* c = coeffs_.data() + index(i, j, 0, 0);
        double v = 0.0;
        for (int a = 0; a < n; ++a) {
            double row = 0.0;
            for (int b = 0; b < n; ++b) row += c[a * n + b] * py[b];
            v += px[a] * row;
        }
        return v;
    }

    bool compatible(const DgField2D& o) const { return degree_ == o.degree_ && mesh_ == o.mesh_; }

private:
    static const GaussRule& rule_for(int degree)
    {
        if (degree < 0 || degree + 1 > max_gauss_points) {
            throw config_error("DgField2D: degree " + std::to_string(degree) + " unsupported");
        }
        return cached_gauss_rule(degree + 1);
    }

    Mesh2D mesh_;
    int degree_;
    const GaussRule* rule_;
    std::vector<double> coeffs_;
};

/// L2 projection onto Q_k with a 2(k+1) x 2(k+1) tensor rule per cell.
inline DgField2D project2d(const Fn2& f, const Mesh2D& mesh, int degree)
{
    DgField2D u(mesh, degree);
    const int n = degree + 1;
    const GaussRule& fine = cached_gauss_rule(std::min(2 * n, max_gauss_points));
    const GaussRule& rule = u.rule();
    // basis values of the solution nodes at the fine nodes
    std::vector<double> phi(static_cast<std::size_t>(fine.n) * n);
    for (int g = 0; g < fine.n; ++g) lagrange_basis_all(rule, fine.nodes[g], std::span<double>(phi.data() + g * n, n));
    std::vector<double> vals(static_cast<std::size_t>(fine.n) * fine.n);
    for (int i = 0; i < mesh.x.cells(); ++i) {
        for (int j = 0; j < mesh.y.cells(); ++j) {
            for (int gx = 0; gx < fine.n; ++gx) {
                const double x = mesh.x.interface(i) + 0.5 * (1.0 + fine.nodes[gx]) * mesh.x.dx();
                for (int gy = 0; gy < fine.n; ++gy) {
                    const double y = mesh.y.interface(j) + 0.5 * (1.0 + fine.nodes[gy]) * mesh.y.dx();
                    const double v = f(x, y);
                    if (!std::isfinite(v)) {
                        throw numerical_error("project2d: non-finite data in cell (" + std::to_string(i) + "," +
                                              std::to_string(j) + ")");
                    }
                    vals[gx * fine.n + gy] = v;
                }
            }
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    double acc = 0.0;
                    for (int gx = 0; gx < fine.n; ++gx) {
                        double row = 0.0;
                        for (int gy = 0; gy < fine.n; ++gy) row += fine.weights[gy] * vals[gx * fine.n + gy] * phi[gy * n + b];
                        acc += fine.weights[gx] * phi[gx * n + a] * row;
                    }
                    u(i, j, a, b) = acc / (rule.weights[a] * rule.weights[b]);
                }
            }
        }
    }
    return u;
}

namespace detail {

template <class CellFn>
Norms measure2d(const DgField2D& u, CellFn&& e, L2Rule l2_rule)
{
    const Mesh2D& m = u.mesh();
    const int n = u.nodes_per_cell();
    const GaussRule& rule = u.rule();
    const GaussRule& fine = cached_gauss_rule(std::min(2 * n, max_gauss_points));
    const int samples = 4 * n;
    const double area = 0.25 * m.x.dx() * m.y.dx();
    Norms out;
    double l1 = 0.0;
    double l2 = 0.0;
    double l1_nodes = 0.0;
    for (int i = 0; i < m.x.cells(); ++i) {
        for (int j = 0; j < m.y.cells(); ++j) {
            double c1 = 0.0;
            double c2 = 0.0;
            double cn = 0.0;
            for (int gx = 0; gx < fine.n; ++gx) {
                const double x = m.x.interface(i) + 0.5 * (1.0 + fine.nodes[gx]) * m.x.dx();
                for (int gy = 0; gy < fine.n; ++gy) {
                    const double y = m.y.interface(j) + 0.5 * (1.0 + fine.nodes[gy]) * m.y.dx();
                    const double v = e(i, j, x, y);
                    const double w = fine.weights[gx] * fine.weights[gy];
                    c1 += w * std::abs(v);
                    if (l2_rule == L2Rule::oversampled) c2 += w * v * v;
                }
            }
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    const double v = e(i, j, u.node_x(i, a), u.node_y(j, b));
                    const double w = rule.weights[a] * rule.weights[b];
                    cn += w * std::abs(v);
                    if (l2_rule == L2Rule::nodal) c2 += w * v * v;
                }
            }
            l1 += area * c1;
            l2 += area * c2;
            l1_nodes += area * cn;
            for (int sx = 0; sx < samples; ++sx) {
                const double x = m.x.interface(i) + m.x.dx() * sx / (samples - 1);
                for (int sy = 0; sy < samples; ++sy) {
                    const double y = m.y.interface(j) + m.y.dx() * sy / (samples - 1);
                    out.linf = std::max(out.linf, std::abs(e(i, j, x, y)));
                }
            }
        }
    }
    out.l1 = l1;
    out.l2 = std::sqrt(l2);
    out.l1_nodes = l1_nodes;
    return out;
}

} // namespace detail

inline Norms norms(const DgField2D& u)
{
    return detail::measure2d(
        u, [&](int i, int j, double x, double y) { return u.eval_in_cell(i, j, x, y); }, L2Rule::nodal);
}

inline Norms error_vs(const DgField2D& u, const SpaceTimeFn2& exact, double t, L2Rule l2_rule = L2Rule::nodal)
{
    return detail::measure2d(
        u, [&](int i, int j, double x, double y) { return u.eval_in_cell(i, j, x, y) - exact(t, x, y); }, l2_rule);
}

inline void require_finite(const DgField2D& u, const char* where)
{
    for (double v : u.coeffs()) {
        if (!std::isfinite(v)) throw numerical_error(std::string(where) + ": non-finite coefficient");
    }
}

/// Snapshot export, one row per tensor node.
inline void write_csv(std::ostream& os, const DgField2D& u)
{
    const auto old_precision = os.precision(17);
    os << "cell_x,cell_y,alpha,beta,x,y,value\n";
    const int n = u.nodes_per_cell();
    for (int i = 0; i < u.mesh().x.cells(); ++i) {
        for (int j = 0; j < u.mesh().y.cells(); ++j) {
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    os << i << ',' << j << ',' << a << ',' << b << ',' << u.node_x(i, a) << ',' << u.node_y(j, b)
                       << ',' << u(i, j, a, b) << '\n';
                }
            }
        }
    }
    os.precision(old_precision);
}

/// A 1D step applied to one grid line; `transverse` is the frozen other coordinate.
using LineStep = std::function<DgField1D(const DgField1D& line, double transverse)>;

/// Applies `step` to every line along `axis` (1 = x, 2 = y) at each transverse Gauss ordinate.
inline DgField2D apply_dir(const DgField2D& u, int axis, const LineStep& step)
{
    if (axis != 1 && axis != 2) throw config_error("apply_dir: axis must be 1 or 2");
    const Mesh2D& m = u.mesh();
    const int n = u.nodes_per_cell();
    const Mesh1D& along = axis == 1 ? m.x : m.y;
    const Mesh1D& across = axis == 1 ? m.y : m.x;
    DgField2D out(m, u.degree());
    parallel_for(across.cells() * n, [&](int line) {
        const int c = line / n;
        const int q = line % n;
        DgField1D in(along, u.degree());
        for (int i = 0; i < along.cells(); ++i) {
            for (int a = 0; a < n; ++a) in(i, a) = axis == 1 ? u(i, c, a, q) : u(c, i, q, a);
        }
        const double transverse = across.interface(c) + 0.5 * (1.0 + u.rule().nodes[q]) * across.dx();
        const DgField1D res = step(in, transverse);
        if (!res.compatible(in)) throw config_error("apply_dir: step changed the line mesh or degree");
        for (int i = 0; i < along.cells(); ++i) {
            for (int a = 0; a < n; ++a) (axis == 1 ? out(i, c, a, q) : out(c, i, q, a)) = res(i, a);
        }
    });
    return out;
}

enum class SplitKind { trotter, strang, ruth3, forest4, yoshida6 };

struct SplitStage {
    int axis = 1;
    double theta = 1.0;
};

struct SplitSchedule {
    SplitKind kind = SplitKind::strang;
    std::vector<SplitStage> stages;

    double axis_sum(int axis) const
    {
        double s = 0.0;
        for (const auto& st : stages) {
            if (st.axis == axis) s += st.theta;
        }
        return s;
    }
};

inline std::string to_string(SplitKind k)
{
    switch (k) {
    case SplitKind::trotter: return "trotter";
    case SplitKind::strang: return "strang";
    case SplitKind::ruth3: return "ruth3";
    case SplitKind::forest4: return "forest4";
    case SplitKind::yoshida6: return "yoshida6";
    }
    return "?";
}

inline std::optional<SplitKind> parse_split_kind(const std::string& s)
{
    for (auto k : {SplitKind::trotter, SplitKind::strang, SplitKind::ruth3, SplitKind::forest4, SplitKind::yoshida6}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

namespace detail {

inline void push_merged(std::vector<SplitStage>& out, SplitStage s)
{
    if (!out.empty() && out.back().axis == s.axis) {
        out.back().theta += s.theta;
    } else {
        out.push_back(s);
    }
}

inline std::vector<SplitStage> forest_stages(double scale)
{
    const double c = std::cbrt(2.0);
    const double g1 = 1.0 / (2.0 - c);
    const double g2 = -c / (2.0 - c);
    return {{1, scale * g1 / 2.0}, {2, scale * g1},        {1, scale * (g1 + g2) / 2.0}, {2, scale * g2},
            {1, scale * (g1 + g2) / 2.0}, {2, scale * g1}, {1, scale * g1 / 2.0}};
}

} // namespace detail

/// Stage list of a splitting; stages apply in list order.
inline SplitSchedule schedule(SplitKind kind)
{
    SplitSchedule s;
    s.kind = kind;
    switch (kind) {
    case SplitKind::trotter: s.stages = {{1, 1.0}, {2, 1.0}}; break;
    case SplitKind::strang: s.stages = {{1, 0.5}, {2, 1.0}, {1, 0.5}}; break;
    case SplitKind::ruth3: {
        const double c[3] = {7.0 / 24.0, 3.0 / 4.0, -1.0 / 24.0};
        const double d[3] = {2.0 / 3.0, -2.0 / 3.0, 1.0};
        for (int i = 0; i < 3; ++i) {
            s.stages.push_back({1, c[i]});
            s.stages.push_back({2, d[i]});
        }
        break;
    }
    case SplitKind::forest4: s.stages = detail::forest_stages(1.0); break;
    case SplitKind::yoshida6: {
        const double c = std::pow(2.0, 0.2);
        const double y1 = 1.0 / (2.0 - c);
        const double y2 = -c / (2.0 - c);
        for (double y : {y1, y2, y1}) {
            for (const auto& st : detail::forest_stages(y)) detail::push_merged(s.stages, st);
        }
        break;
    }
    }
    return s;
}

/// Backward map along `axis` for the line at `transverse`, over (signed) time tau.
using DirectionalFlow = std::function<BackwardMap(int axis, double transverse, double tau)>;

/// One split step: each stage advects every line along its axis over theta * dt.
inline DgField2D split_advect(const DgField2D& u, const DirectionalFlow& flow, double dt, const SplitSchedule& sched)
{
    DgField2D v = u;
    for (const auto& st : sched.stages) {
        const double tau = st.theta * dt;
        v = apply_dir(v, st.axis, [&](const DgField1D& line, double tr) {
            return advect_step(line, flow(st.axis, tr, tau));
        });
    }
    require_finite(v, "split_advect");
    return v;
}

/// split_advect for u_t + b1 u_x + b2 u_y = 0 with characteristics integrated by ode_map
/// along each line (the transverse coordinate frozen).
inline DgField2D split_advect(const DgField2D& u, const Fn2& b1, const Fn2& b2, double dt, const SplitSchedule& sched,
                              const OdeMapOptions& opt = {})
{
    const DirectionalFlow flow = [&](int axis, double tr, double tau) {
        ScalarFn b = axis == 1 ? ScalarFn([&b1, tr](double x) { return b1(x, tr); })
                               : ScalarFn([&b2, tr](double y) { return b2(tr, y); });
        return ode_map(std::move(b), tau, opt);
    };
    return split_advect(u, flow, dt, sched);
}

/// Which coordinates a coefficient depends on.
enum class Dependence { none, x, y, both };

/// sigma(x, y) as a 2x2 matrix, row-major {s11, s12, s21, s22}, with declared dependences.
struct MatrixField2D {
    std::function<std::array<double, 4>(double, double)> entries;
    std::array<Dependence, 4> depends{Dependence::both, Dependence::both, Dependence::both, Dependence::both};
};

/// One column sigma_q of sigma; component c depends on the coordinates in depends[c].
struct DiffusionDirection {
    std::function<std::array<double, 2>(double, double)> column;
    std::array<Dependence, 2> depends{Dependence::both, Dependence::both};

    /// Each component depends at most on its own coordinate.
    bool factorizes() const
    {
        return (depends[0] == Dependence::none || depends[0] == Dependence::x) &&
               (depends[1] == Dependence::none || depends[1] == Dependence::y);
    }

    /// The component along `axis` (1 or 2) as a function of that axis' coordinate.
    ScalarFn component(int axis) const
    {
        if (!factorizes()) throw config_error("DiffusionDirection: component requested for non-factorizing direction");
        if (axis == 1) return [c = column](double x) { return c(x, 0.0)[0]; };
        return [c = column](double y) { return c(0.0, y)[1]; };
    }

    /// True when the component along `axis` is identically zero.
    bool inactive(int axis) const
    {
        const int c = axis - 1;
        return depends[c] == Dependence::none && column(0.0, 0.0)[c] == 0.0;
    }
};

/// Columns of sigma, so that sigma sigma^T = sum_q sigma_q sigma_q^T.
inline std::vector<DiffusionDirection> decompose_diffusion(const MatrixField2D& sigma)
{
    std::vector<DiffusionDirection> out;
    for (int q = 0; q < 2; ++q) {
        DiffusionDirection d;
        d.column = [e = sigma.entries, q](double x, double y) {
            const auto s = e(x, y);
            return std::array<double, 2>{s[q], s[2 + q]};
        };
        d.depends = {sigma.depends[q], sigma.depends[2 + q]};
        if (!d.factorizes()) {
            throw config_error("decompose_diffusion: direction " + std::to_string(q + 1) +
                               " does not factorize per axis (unsupported)");
        }
        out.push_back(std::move(d));
    }
    return out;
}

/// Drift B_q = (b1(x), 0) or (0, b2(y)) of a one-direction subproblem
/// u_t - 1/2 Tr(sigma_q sigma_q^T D^2 u) - B_q . grad u = 0; empty means zero.
struct Drift2D {
    ScalarFn b1;
    ScalarFn b2;
};

/// One weak-scheme step for a single diffusion direction: for each branch q, move along
/// x with the first-component branch map, then along y with the second, and combine
/// with the branch weights.
inline DgField2D weak_step_2d(const DgField2D& u, const DiffusionDirection& dir, const Drift2D& drift, double dt,
                              int order, InvertibilityCheck check = InvertibilityCheck::sufficient)
{
    if (dt < 0.0) throw config_error("weak_step_2d: negative time step (diffusion is not reversible)");
    if (order != 1 && order != 2) throw config_error("weak_step_2d: order must be 1 or 2");
    if (!dir.factorizes()) throw config_error("weak_step_2d: direction does not factorize per axis");
    const Mesh2D& m = u.mesh();
    std::array<std::vector<Branch>, 2> fam;
    std::array<bool, 2> active{};
    for (int axis = 1; axis <= 2; ++axis) {
        const ScalarFn& b = axis == 1 ? drift.b1 : drift.b2;
        active[axis - 1] = !dir.inactive(axis) || static_cast<bool>(b);
        if (!active[axis - 1]) continue;
        BranchOptions opt;
        const Mesh1D& along = axis == 1 ? m.x : m.y;
        opt.domain = {along.x_min(), along.x_max()};
        opt.check = check;
        const ScalarFn bb = b ? b : ScalarFn([](double) { return 0.0; });
        const ScalarFn s = dir.component(axis);
        fam[axis - 1] = order == 1 ? euler_branches(bb, s, dt, opt) : platen_branches(bb, s, dt, opt);
    }
    if (!active[0] && !active[1]) return u;
    const std::size_t branches = order == 1 ? 2 : 3;
    DgField2D out(m, u.degree());
    for (std::size_t q = 0; q < branches; ++q) {
        DgField2D v = u;
        double weight = 0.0;
        for (int axis = 1; axis <= 2; ++axis) {
            if (!active[axis - 1]) continue;
            const Branch& br = fam[axis - 1][q];
            weight = br.weight;
            v = apply_dir(v, axis, [&](const DgField1D& line, double) { return advect_step(line, br.map); });
        }
        const auto& src = v.coeffs();
        auto& dst = out.coeffs();
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += weight * src[j];
    }
    require_finite(out, "weak_step_2d");
    return out;
}

/// u(x - shift) for a constant vector shift, as one exact move per axis.
inline DgField2D shift2d(const DgField2D& u, double sx, double sy)
{
    DgField2D v = u;
    if (sx != 0.0) {
        const BackwardMap mx = shift_map(sx);
        v = apply_dir(v, 1, [&](const DgField1D& line, double) { return advect_step(line, mx); });
    }
    if (sy != 0.0) {
        const BackwardMap my = shift_map(sy);
        v = apply_dir(v, 2, [&](const DgField1D& line, double) { return advect_step(line, my); });
    }
    return v;
}

/// SLDG-p step for a constant diffusion direction s = (s1, s2):
/// S v = (v(x - s sqrt(dt)) + v(x + s sqrt(dt))) / 2 inside the SLDG-p combination.
inline DgField2D sldg_const_2d(const DgField2D& u, double s1, double s2, double dt, int p)
{
    const double h = std::sqrt(dt);
    return sldg_combine(
        u,
        [&](const DgField2D& v, int) {
            const DgField2D minus = shift2d(v, s1 * h, s2 * h);
            const DgField2D plus = shift2d(v, -s1 * h, -s2 * h);
            return weighted_sum<DgField2D>({{0.5, &minus}, {0.5, &plus}});
        },
        p);
}

/// Source f and the derivatives used by the second-order correction.
struct SourceSpec2D {
    SpaceTimeFn2 f;
    SpaceTimeFn2 f_t;
    SpaceTimeFn2 f_x;
    SpaceTimeFn2 f_y;
    SpaceTimeFn2 f_xx;
    SpaceTimeFn2 f_xy;
    SpaceTimeFn2 f_yy;
};

/// Adds h f (order 1) or h f + h^2/2 (A f + f_t) (order 2) at every tensor node, with
/// A f = 1/2 Tr(sigma sigma^T D^2 f) + b . grad f - r f.
inline DgField2D source_correct_2d(const DgField2D& u, const SourceSpec2D& src, const MatrixField2D& sigma,
                                   double t_n, double dt, int order, const Fn2& b1 = {}, const Fn2& b2 = {},
                                   double r = 0.0)
{
    if (order != 1 && order != 2) throw config_error("source_correct_2d: order must be 1 or 2");
    if (!src.f) throw config_error("source_correct_2d: source f missing");
    if (order == 2 && (!src.f_t || !src.f_x || !src.f_y || !src.f_xx || !src.f_xy || !src.f_yy)) {
        throw config_error("source_correct_2d: order 2 needs f_t and all first and second derivatives");
    }
    DgField2D out = u;
    const int n = u.nodes_per_cell();
    const Mesh2D& m = u.mesh();
    parallel_for(m.x.cells(), [&](int i) {
        for (int j = 0; j < m.y.cells(); ++j) {
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    const double x = u.node_x(i, a);
                    const double y = u.node_y(j, b);
                    const double f = src.f(t_n, x, y);
                    double add = dt * f;
                    if (order == 2) {
                        const auto s = sigma.entries(x, y);
                        const double a11 = s[0] * s[0] + s[1] * s[1];
                        const double a12 = s[0] * s[2] + s[1] * s[3];
                        const double a22 = s[2] * s[2] + s[3] * s[3];
                        double af = 0.5 * (a11 * src.f_xx(t_n, x, y) + 2.0 * a12 * src.f_xy(t_n, x, y) +
                                           a22 * src.f_yy(t_n, x, y)) -
                                    r * f;
                        if (b1) af += b1(x, y) * src.f_x(t_n, x, y);
                        if (b2) af += b2(x, y) * src.f_y(t_n, x, y);
                        add += 0.5 * dt * dt * (af + src.f_t(t_n, x, y));
                    }
                    out(i, j, a, b) += add;
                }
            }
        }
    });
    require_finite(out, "source_correct_2d");
    return out;
}

} // namespace sldg
