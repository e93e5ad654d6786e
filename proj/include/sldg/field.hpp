#pragma once

/// Uniform 1D meshes, nodal DG fields at Gauss points, L2 projection,
/// point evaluation, norms and error measurement.

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sldg/errors.hpp"
#include "sldg/quadbasis.hpp"

namespace sldg {

using ScalarFn = std::function<double(double)>;
/// f(t, x)
using SpaceTimeFn = std::function<double(double, double)>;

enum class Boundary { periodic, extended };

/// Uniform partition of (x_min, x_max) into cells (x_{i-1/2}, x_{i+1/2}),
/// x_{i-1/2} = x_min + i*dx.
class Mesh1D {
public:
    Mesh1D(double x_min, double x_max, int cells, Boundary boundary = Boundary::periodic)
        : x_min_(x_min), x_max_(x_max), cells_(cells), boundary_(boundary)
    {
        if (!(x_min < x_max)) throw config_error("Mesh1D: x_min must be < x_max");
        if (cells < 1) throw config_error("Mesh1D: cell count must be >= 1");
        dx_ = (x_max - x_min) / cells;
    }

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    int cells() const { return cells_; }
    Boundary boundary() const { return boundary_; }
    bool periodic() const { return boundary_ == Boundary::periodic; }
    double dx() const { return dx_; }
    double length() const { return x_max_ - x_min_; }

    /// x_{i-1/2}; i may lie outside [0, M] (unwrapped interfaces).
    double interface(long long i) const { return x_min_ + static_cast<double>(i) * dx_; }

    /// Owning cell of x in [x_min, x_max]: the left cell owns its right endpoint,
    /// except x_min which belongs to cell 0.
    int locate(double x) const
    {
        const double s = (x - x_min_) / dx_;
        int i = static_cast<int>(std::ceil(s)) - 1;
        if (i < 0) i = 0;
        if (i >= cells_) i = cells_ - 1;
        return i;
    }

    /// Brings x into [x_min, x_max) by one periodic shift.
    double wrap(double x) const
    {
        const double p = length();
        return x - p * std::floor((x - x_min_) / p);
    }

    friend bool operator==(const Mesh1D& a, const Mesh1D& b)
    {
        return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.cells_ == b.cells_ &&
               a.boundary_ == b.boundary_;
    }

private:
    double x_min_;
    double x_max_;
    int cells_;
    Boundary boundary_;
    double dx_;
};

/// Values outside an EXTENDED mesh: left(t, x) for x <= x_min, right(t, x) for x >= x_max.
struct BoundaryExtension {
    SpaceTimeFn left;
    SpaceTimeFn right;
};

/// Element of V_k in nodal form: coefficient (i, alpha) is the value at the
/// mapped Gauss node x_{i-1/2} + (1 + x_alpha) dx / 2.
class DgField1D {
public:
    DgField1D(const Mesh1D& mesh, int degree)
        : mesh_(mesh), degree_(degree), rule_(&rule_for(degree)),
          coeffs_(static_cast<std::size_t>(mesh.cells()) * (degree + 1), 0.0)
    {
    }

    DgField1D(const Mesh1D& mesh, int degree, std::vector<double> coeffs)
        : mesh_(mesh), degree_(degree), rule_(&rule_for(degree)), coeffs_(std::move(coeffs))
    {
        if (coeffs_.size() != static_cast<std::size_t>(mesh.cells()) * (degree + 1)) {
            throw config_error("DgField1D: coefficient array has wrong size");
        }
    }

    const Mesh1D& mesh() const { return mesh_; }
    int degree() const { return degree_; }
    int nodes_per_cell() const { return degree_ + 1; }
    const GaussRule& rule() const { return *rule_; }

    double& operator()(int i, int alpha) { return coeffs_[static_cast<std::size_t>(i) * (degree_ + 1) + alpha]; }
    double operator()(int i, int alpha) const { return coeffs_[static_cast<std::size_t>(i) * (degree_ + 1) + alpha]; }

    std::span<double> cell(int i) { return {coeffs_.data() + static_cast<std::size_t>(i) * (degree_ + 1), static_cast<std::size_t>(degree_ + 1)}; }
    std::span<const double> cell(int i) const { return {coeffs_.data() + static_cast<std::size_t>(i) * (degree_ + 1), static_cast<std::size_t>(degree_ + 1)}; }

    std::vector<double>& coeffs() { return coeffs_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Physical position of node alpha in cell i.
    double node(int i, int alpha) const
    {
        return mesh_.interface(i) + 0.5 * (1.0 + rule_->nodes[alpha]) * mesh_.dx();
    }
    /// w_alpha^i = (dx/2) w_alpha.
    double weight(int alpha) const { return 0.5 * mesh_.dx() * rule_->weights[alpha]; }

    /// Reference coordinate of x relative to cell i (not restricted to [-1,1]).
    double reference(int i, double x) const { return 2.0 * (x - mesh_.interface(i)) / mesh_.dx() - 1.0; }

    /// The polynomial of cell i evaluated at x (extrapolates outside the cell).
    double eval_in_cell(int i, double x) const { return lagrange_eval(*rule_, cell(i), reference(i, x)); }

    bool compatible(const DgField1D& other) const { return degree_ == other.degree_ && mesh_ == other.mesh_; }

private:
    static const GaussRule& rule_for(int degree)
    {
        if (degree < 0 || degree + 1 > max_gauss_points) {
            throw config_error("DgField1D: degree " + std::to_string(degree) + " unsupported");
        }
        return cached_gauss_rule(degree + 1);
    }

    Mesh1D mesh_;
    int degree_;
    const GaussRule* rule_;
    std::vector<double> coeffs_;
};

struct Norms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double l1_nodes = 0.0; ///< L1 with the solution's own Gauss rule (nodes only)
};

/// How the L2 part of error_vs is integrated. `nodal` sums w_alpha^i e(x_alpha^i)^2 at
/// the k+1 solution nodes; `oversampled` uses a 2(k+1)-point rule per cell.
enum class L2Rule { nodal, oversampled };

/// L2 projection of f onto V_k, integrated per cell with a 2(k+1)-point rule.
inline DgField1D project(const ScalarFn& f, const Mesh1D& mesh, int degree)
{
    DgField1D u(mesh, degree);
    const int n = degree + 1;
    const GaussRule& fine = cached_gauss_rule(std::min(2 * n, max_gauss_points));
    const GaussRule& rule = u.rule();
    std::vector<double> phi(n);
    for (int i = 0; i < mesh.cells(); ++i) {
        auto c = u.cell(i);
        for (int g = 0; g < fine.n; ++g) {
            const double x = mesh.interface(i) + 0.5 * (1.0 + fine.nodes[g]) * mesh.dx();
            const double fx = f(x);
            if (!std::isfinite(fx)) {
                throw numerical_error("project: non-finite data in cell " + std::to_string(i) +
                                      " at x=" + std::to_string(x));
            }
            lagrange_basis_all(rule, fine.nodes[g], phi);
            for (int b = 0; b < n; ++b) c[b] += fine.weights[g] * fx * phi[b];
        }
        for (int b = 0; b < n; ++b) c[b] /= rule.weights[b];
    }
    return u;
}

/// Value of u at x. Periodic meshes wrap x; on EXTENDED meshes points outside
/// [x_min, x_max] are taken from ext (error when ext is null).
inline double eval(const DgField1D& u, double x, double t = 0.0, const BoundaryExtension* ext = nullptr)
{
    const Mesh1D& m = u.mesh();
    if (m.periodic()) {
        x = m.wrap(x);
    } else if (x < m.x_min() || x > m.x_max()) {
        if (ext == nullptr) {
            throw config_error("eval: x=" + std::to_string(x) + " outside extended mesh and no extension given");
        }
        return x < m.x_min() ? ext->left(t, x) : ext->right(t, x);
    }
    return u.eval_in_cell(m.locate(x), x);
}

namespace detail {

// Shared sampling for norms and error_vs; e(x) is the pointwise quantity in cell i.
template <class CellFn>
Norms measure(const DgField1D& u, CellFn&& e, L2Rule l2_rule)
{
    const Mesh1D& m = u.mesh();
    const int n = u.nodes_per_cell();
    const GaussRule& fine = cached_gauss_rule(std::min(2 * n, max_gauss_points));
    const int samples = 4 * n;
    Norms out;
    double l1 = 0.0;
    double l2 = 0.0;
    double l1_nodes = 0.0;
    for (int i = 0; i < m.cells(); ++i) {
        const double a = m.interface(i);
        double cell_l1 = 0.0;
        double cell_l2 = 0.0;
        double cell_nodes = 0.0;
        for (int g = 0; g < fine.n; ++g) {
            const double x = a + 0.5 * (1.0 + fine.nodes[g]) * m.dx();
            const double v = e(i, x);
            cell_l1 += fine.weights[g] * std::abs(v);
            if (l2_rule == L2Rule::oversampled) cell_l2 += fine.weights[g] * v * v;
        }
        for (int alpha = 0; alpha < n; ++alpha) {
            const double v = e(i, u.node(i, alpha));
            cell_nodes += u.rule().weights[alpha] * std::abs(v);
            if (l2_rule == L2Rule::nodal) cell_l2 += u.rule().weights[alpha] * v * v;
        }
        l1 += 0.5 * m.dx() * cell_l1;
        l2 += 0.5 * m.dx() * cell_l2;
        l1_nodes += 0.5 * m.dx() * cell_nodes;
        for (int s = 0; s < samples; ++s) {
            const double x = a + m.dx() * static_cast<double>(s) / (samples - 1);
            out.linf = std::max(out.linf, std::abs(e(i, x)));
        }
    }
    out.l1 = l1;
    out.l2 = std::sqrt(l2);
    out.l1_nodes = l1_nodes;
    return out;
}

} // namespace detail

/// (L1, L2, Linf) of u. L2 uses the nodal identity (exact on V_k); L1 a
/// 2(k+1)-point rule of |u|; Linf the max over 4(k+1) equispaced samples per cell.
inline Norms norms(const DgField1D& u)
{
    return detail::measure(
        u, [&](int i, double x) { return u.eval_in_cell(i, x); }, L2Rule::nodal);
}

/// Norms of u - exact(t, .) with the same sampling as norms().
inline Norms error_vs(const DgField1D& u, const SpaceTimeFn& exact, double t, L2Rule l2_rule = L2Rule::nodal)
{
    return detail::measure(
        u, [&](int i, double x) { return u.eval_in_cell(i, x) - exact(t, x); }, l2_rule);
}

/// sum_j c_j u_j over fields sharing mesh and degree.
inline DgField1D lincomb(std::span<const std::pair<double, const DgField1D*>> terms)
{
    if (terms.empty()) throw config_error("lincomb: no terms");
    const DgField1D& first = *terms.front().second;
    DgField1D out(first.mesh(), first.degree());
    auto& dst = out.coeffs();
    for (const auto& [c, f] : terms) {
        if (!f->compatible(first)) throw config_error("lincomb: mesh/degree mismatch");
        const auto& src = f->coeffs();
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += c * src[j];
    }
    return out;
}

inline DgField1D lincomb(std::initializer_list<std::pair<double, const DgField1D*>> terms)
{
    return lincomb(std::span<const std::pair<double, const DgField1D*>>(terms.begin(), terms.size()));
}

/// Throws numerical_error if any coefficient is NaN or infinite.
inline void require_finite(const DgField1D& u, const char* where)
{
    for (double v : u.coeffs()) {
        if (!std::isfinite(v)) throw numerical_error(std::string(where) + ": non-finite coefficient");
    }
}

/// Snapshot export, one row per node: cell,alpha,x,value.
inline void write_csv(std::ostream& os, const DgField1D& u)
{
    const auto old_precision = os.precision(17);
    os << "cell,alpha,x,value\n";
    for (int i = 0; i < u.mesh().cells(); ++i) {
        for (int a = 0; a < u.nodes_per_cell(); ++a) {
            os << i << ',' << a << ',' << u.node(i, a) << ',' << u(i, a) << '\n';
        }
    }
    os.precision(old_precision);
}

} // namespace sldg
