#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sldg/transport.hpp"

using namespace sldg;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

DgField1D random_field(const Mesh1D& mesh, int k)
{
    DgField1D u(mesh, k);
    for (double& v : u.coeffs()) v = oracle::uniform(-1.0, 1.0);
    return u;
}

// Same foot as shift_map but without the shift tag, forcing the breakpoint path.
BackwardMap untagged_shift(double s)
{
    BackwardMap m;
    m.foot = [s](double x) { return x - s; };
    m.displacement_bound = std::abs(s);
    return m;
}

// Exact L2 projection of x -> u(foot(x)) with a fine composite rule on each cell.
// Nodal coefficients are (integral of g * psi_b) / weight_b.
DgField1D projected_composition(const DgField1D& u, const ScalarFn& foot, int panels)
{
    const Mesh1D& m = u.mesh();
    DgField1D out(m, u.degree());
    for (int i = 0; i < m.cells(); ++i) {
        for (int b = 0; b <= u.degree(); ++b) {
            const long double moment = oracle::integrate(
                [&](long double x) {
                    const double xd = static_cast<double>(x);
                    return static_cast<long double>(eval(u, foot(xd))) *
                           lagrange_basis_at(u.rule(), b, u.reference(i, xd));
                },
                m.interface(i), m.interface(i + 1), panels);
            out(i, b) = static_cast<double>(moment) / u.weight(b);
        }
    }
    return out;
}

double max_diff(const DgField1D& a, const DgField1D& b)
{
    double d = 0.0;
    for (std::size_t j = 0; j < a.coeffs().size(); ++j) d = std::max(d, std::abs(a.coeffs()[j] - b.coeffs()[j]));
    return d;
}

double mass(const DgField1D& u)
{
    long double s = 0.0L;
    for (int i = 0; i < u.mesh().cells(); ++i) {
        for (int a = 0; a <= u.degree(); ++a) s += static_cast<long double>(u.weight(a)) * u(i, a);
    }
    return static_cast<double>(s);
}

} // namespace

TEST(AdvectStep, ShiftIsExactProjectionOfTranslate)
{
    const Mesh1D m(0.0, 1.0, 9);
    for (int k = 0; k <= 4; ++k) {
        const DgField1D u = random_field(m, k);
        for (double frac : {0.3, -0.45, 2.7, 0.0001}) {
            const double s = frac * m.dx();
            const DgField1D fast = advect_step(u, shift_map(s));
            const DgField1D slow = advect_step(u, untagged_shift(s));
            // the translate is smooth except at one point per cell, so split there
            DgField1D ref(m, k);
            for (int i = 0; i < m.cells(); ++i) {
                const double cut = m.interface(i) + (frac - std::floor(frac)) * m.dx();
                for (int b = 0; b <= k; ++b) {
                    const auto g = [&](long double x) {
                        const double xd = static_cast<double>(x);
                        return static_cast<long double>(eval(u, xd - s)) *
                               lagrange_basis_at(u.rule(), b, u.reference(i, xd));
                    };
                    const long double mom = oracle::integrate(g, m.interface(i), cut, 1) +
                                            oracle::integrate(g, cut, m.interface(i + 1), 1);
                    ref(i, b) = static_cast<double>(mom) / u.weight(b);
                }
            }
            EXPECT_LE(max_diff(fast, ref), 1e-13) << "k=" << k << " frac=" << frac;
            EXPECT_LE(max_diff(slow, ref), 1e-13) << "k=" << k << " frac=" << frac;
        }
    }
}

TEST(AdvectStep, WholeCellShiftRotatesCells)
{
    const Mesh1D m(0.0, 2.0, 10);
    const DgField1D u = random_field(m, 3);
    for (int c : {1, -2, 13}) {
        const DgField1D v = advect_step(u, shift_map(c * m.dx()));
        for (int i = 0; i < m.cells(); ++i) {
            const int src = ((i - c) % m.cells() + m.cells()) % m.cells();
            for (int a = 0; a <= 3; ++a) EXPECT_NEAR(v(i, a), u(src, a), 1e-13);
        }
    }
    const DgField1D same = advect_step(u, shift_map(0.0));
    EXPECT_EQ(same.coeffs(), u.coeffs());
}

TEST(AdvectStep, VariableMapMatchesFineQuadratureOracle)
{
    const Mesh1D m(0.0, 1.0, 12);
    OdeMapOptions opt;
    opt.lipschitz = 0.8 * two_pi;
    opt.speed_bound = 1.8;
    const BackwardMap map = ode_map([](double x) { return 1.0 + 0.8 * std::sin(two_pi * x); }, 0.9 * m.dx(), opt);
    for (int k = 0; k <= 3; ++k) {
        const DgField1D u = project([](double x) { return std::cos(two_pi * x) + 0.3 * x * (1.0 - x); }, m, k);
        const DgField1D v = advect_step(u, map);
        const DgField1D ref = projected_composition(u, map.foot, 256);
        // the scheme uses k+1 Gauss points per subinterval, so it matches the exact
        // projection up to the quadrature error of a smooth non-polynomial integrand
        EXPECT_LE(max_diff(v, ref), 5e-3 * std::pow(0.2, k)) << "k=" << k;
    }
}

TEST(AdvectStep, PreservesConstantsForAnyMonotoneMap)
{
    const Mesh1D m(-1.0, 1.0, 15);
    OdeMapOptions opt;
    opt.lipschitz = two_pi;
    opt.speed_bound = 2.0;
    const std::vector<BackwardMap> maps = {
        shift_map(0.37), untagged_shift(-0.21),
        ode_map([](double x) { return 1.0 + std::sin(std::numbers::pi * x); }, 0.05, opt),
        ode_map([](double x) { return -1.5 + 0.5 * std::cos(std::numbers::pi * x); }, 0.11, opt)};
    for (int k = 0; k <= 5; ++k) {
        const DgField1D u = project([](double) { return 4.5; }, m, k);
        for (const auto& map : maps) {
            const DgField1D v = advect_step(u, map);
            for (double c : v.coeffs()) EXPECT_NEAR(c, 4.5, 4.5e-13) << "k=" << k;
        }
    }
}

TEST(AdvectStep, ShiftConservesMassAndIsL2Contractive)
{
    for (int trial = 0; trial < 40; ++trial) {
        const int k = trial % 5;
        const Mesh1D m(0.0, 1.0, 7 + trial % 11);
        const DgField1D u = random_field(m, k);
        const double s = oracle::uniform(-3.0, 3.0) * m.dx();
        const DgField1D v = advect_step(u, shift_map(s));
        EXPECT_NEAR(mass(v), mass(u), 1e-13);
        EXPECT_LE(norms(v).l2, norms(u).l2 * (1.0 + 1e-13));
    }
}

TEST(AdvectStep, IsLinear)
{
    const Mesh1D m(0.0, 1.0, 11);
    OdeMapOptions opt;
    opt.lipschitz = two_pi;
    const BackwardMap map = ode_map([](double x) { return 0.5 + 0.4 * std::sin(two_pi * x); }, 0.07, opt);
    const DgField1D u = random_field(m, 2);
    const DgField1D w = random_field(m, 2);
    const DgField1D combo = lincomb({{2.0, &u}, {-0.5, &w}});
    const DgField1D au = advect_step(u, map);
    const DgField1D aw = advect_step(w, map);
    const DgField1D lhs = advect_step(combo, map);
    const DgField1D rhs = lincomb({{2.0, &au}, {-0.5, &aw}});
    EXPECT_LE(max_diff(lhs, rhs), 1e-13);
}

TEST(AdvectStep, ConvergesAtOrderKPlusOneForConstantSpeed)
{
    const auto exact = [](double t, double x) { return std::sin(two_pi * (x + t)); };
    for (int k = 1; k <= 3; ++k) {
        double prev = 0.0;
        for (int M = 20; M <= 80; M *= 2) {
            const Mesh1D m(0.0, 1.0, M);
            DgField1D u = project([&](double x) { return exact(0.0, x); }, m, k);
            const int steps = M / 4;
            const double dt = 1.0 / steps;
            const BackwardMap map = constant_map(-1.0, dt);
            for (int n = 0; n < steps; ++n) u = advect_step(u, map);
            const double e = error_vs(u, exact, 1.0).l2;
            if (M > 20) {
                EXPECT_GE(std::log2(prev / e), k + 0.8) << "k=" << k << " M=" << M;
            }
            prev = e;
        }
    }
}

TEST(AdvectStep, ExtendedMeshUsesExtensionOutsideDomain)
{
    const Mesh1D m(0.0, 1.0, 8, Boundary::extended);
    const auto line = [](double x) { return 2.0 - 3.0 * x; };
    BoundaryExtension ext;
    ext.left = [&](double, double x) { return line(x); };
    ext.right = [&](double, double x) { return line(x); };
    const DgField1D u = project(line, m, 2);
    for (double s : {0.3, -0.3, 1.7 * m.dx(), -0.04}) {
        for (const BackwardMap& map : {shift_map(s), untagged_shift(s)}) {
            const DgField1D v = advect_step(u, map, &ext, 0.0);
            for (int i = 0; i < m.cells(); ++i) {
                for (int a = 0; a <= 2; ++a) EXPECT_NEAR(v(i, a), line(v.node(i, a) - s), 1e-13) << s;
            }
        }
    }
    EXPECT_THROW(advect_step(u, shift_map(0.3)), config_error);
}

TEST(AdvectStep, ExtensionReceivesTime)
{
    const Mesh1D m(0.0, 1.0, 4, Boundary::extended);
    BoundaryExtension ext;
    ext.left = [](double t, double) { return t; };
    ext.right = [](double t, double) { return t; };
    const DgField1D u = project([](double) { return 0.25; }, m, 1);
    const DgField1D v = advect_step(u, shift_map(m.dx()), &ext, 0.75);
    for (int a = 0; a <= 1; ++a) EXPECT_NEAR(v(0, a), 0.75, 1e-14);
    for (int a = 0; a <= 1; ++a) EXPECT_NEAR(v(2, a), 0.25, 1e-14);
}

TEST(AdvectStep, RejectsUnflaggedMaps)
{
    BackwardMap bad = untagged_shift(0.1);
    bad.monotone = false;
    EXPECT_THROW(advect_step(DgField1D(Mesh1D(0.0, 1.0, 4), 1), bad), config_error);
}

TEST(DirectStep, EvaluatesAtFeet)
{
    const Mesh1D m(0.0, 1.0, 10);
    const DgField1D u = random_field(m, 3);
    OdeMapOptions opt;
    opt.lipschitz = two_pi;
    const BackwardMap map = ode_map([](double x) { return 1.0 + 0.5 * std::sin(two_pi * x); }, 0.13, opt);
    const DgField1D v = direct_step(u, map);
    for (int i = 0; i < m.cells(); ++i) {
        for (int a = 0; a <= 3; ++a) EXPECT_EQ(v(i, a), eval(u, map.foot(u.node(i, a))));
    }
}

TEST(DirectStep, AgreesWithWeakStepForPolynomialTranslates)
{
    const Mesh1D m(0.0, 3.0, 12, Boundary::extended);
    const auto cubic = [](double x) { return 0.5 * x * x * x - x + 1.0; };
    BoundaryExtension ext;
    ext.left = [&](double, double x) { return cubic(x); };
    ext.right = ext.left;
    const DgField1D u = project(cubic, m, 3);
    const DgField1D weak = advect_step(u, shift_map(0.17), &ext);
    const DgField1D direct = direct_step(u, shift_map(0.17), &ext);
    EXPECT_LE(max_diff(weak, direct), 1e-12);
}

TEST(TransportedExtension, ComposesWithFoot)
{
    BoundaryExtension ext;
    ext.left = [](double t, double x) { return t + x; };
    ext.right = [](double t, double x) { return t * x; };
    const BoundaryExtension moved = transported_extension(ext, shift_map(0.5));
    EXPECT_DOUBLE_EQ(moved.left(1.0, 2.0), 1.0 + 1.5);
    EXPECT_DOUBLE_EQ(moved.right(2.0, 3.0), 2.0 * 2.5);
}
