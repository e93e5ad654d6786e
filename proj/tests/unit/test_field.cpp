#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sldg/field.hpp"

using namespace sldg;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

DgField1D random_field(const Mesh1D& mesh, int k)
{
    DgField1D u(mesh, k);
    for (double& v : u.coeffs()) v = oracle::uniform(-1.0, 1.0);
    return u;
}

} // namespace

TEST(Mesh1D, GeometryAndValidation)
{
    const Mesh1D m(-2.0, 2.0, 8);
    EXPECT_DOUBLE_EQ(m.dx(), 0.5);
    EXPECT_DOUBLE_EQ(m.interface(0), -2.0);
    EXPECT_DOUBLE_EQ(m.interface(3), -0.5);
    EXPECT_DOUBLE_EQ(m.interface(-1), -2.5);
    EXPECT_TRUE(m.periodic());
    EXPECT_THROW(Mesh1D(1.0, 1.0, 4), config_error);
    EXPECT_THROW(Mesh1D(0.0, 1.0, 0), config_error);
}

TEST(Mesh1D, InterfaceOwnershipAndWrap)
{
    const Mesh1D m(0.0, 1.0, 4);
    EXPECT_EQ(m.locate(0.0), 0);
    EXPECT_EQ(m.locate(0.25), 0);
    EXPECT_EQ(m.locate(0.2500001), 1);
    EXPECT_EQ(m.locate(1.0), 3);
    EXPECT_NEAR(m.wrap(1.3), 0.3, 1e-15);
    EXPECT_NEAR(m.wrap(-0.2), 0.8, 1e-15);
    EXPECT_DOUBLE_EQ(m.wrap(0.6), 0.6);
}

TEST(DgField1D, NodesAndWeights)
{
    const Mesh1D m(0.0, 2.0, 4);
    const DgField1D u(m, 2);
    const GaussRule& r = cached_gauss_rule(3);
    EXPECT_NEAR(u.node(1, 0), 0.5 + 0.25 * (1.0 + r.nodes[0]), 1e-15);
    EXPECT_NEAR(u.weight(1), 0.25 * r.weights[1], 1e-15);
    EXPECT_THROW(DgField1D(m, 2, std::vector<double>(5)), config_error);
    EXPECT_THROW(DgField1D(m, -1), config_error);
}

TEST(Project, ReproducesLinearFunctionsAndZero)
{
    const Mesh1D m(-1.0, 3.0, 7);
    for (int k = 1; k <= 6; ++k) {
        const DgField1D u = project([](double x) { return 2.0 * x - 0.5; }, m, k);
        for (int i = 0; i < m.cells(); ++i) {
            for (int a = 0; a <= k; ++a) EXPECT_NEAR(u(i, a), 2.0 * u.node(i, a) - 0.5, 1e-13);
        }
        const DgField1D z = project([](double) { return 0.0; }, m, k);
        for (double v : z.coeffs()) EXPECT_EQ(v, 0.0);
    }
}

TEST(Project, ErrorDecaysAtOrderKPlusOne)
{
    const auto f = [](double x) { return std::sin(two_pi * x); };
    const SpaceTimeFn exact = [&](double, double x) { return f(x); };
    for (int k = 0; k <= 4; ++k) {
        double prev = 0.0;
        for (int M = 23; M <= 184; M *= 2) {
            const DgField1D u = project(f, Mesh1D(0.0, 1.0, M), k);
            const double e = error_vs(u, exact, 0.0, L2Rule::oversampled).l2;
            if (M > 23) {
                EXPECT_GE(std::log2(prev / e), k + 0.7) << "k=" << k << " M=" << M;
            }
            prev = e;
        }
    }
}

TEST(Project, IsIdempotentOnVk)
{
    const Mesh1D m(0.0, 1.0, 13);
    for (int k = 0; k <= 6; ++k) {
        const DgField1D u = random_field(m, k);
        const DgField1D v = project([&](double x) { return eval(u, x); }, m, k);
        for (std::size_t j = 0; j < u.coeffs().size(); ++j) EXPECT_NEAR(v.coeffs()[j], u.coeffs()[j], 1e-13);
    }
}

TEST(Project, RejectsNonFiniteData)
{
    EXPECT_THROW(project([](double x) { return x > 0.5 ? std::nan("") : 0.0; }, Mesh1D(0.0, 1.0, 4), 1),
                 numerical_error);
}

TEST(Eval, ReturnsNodalValuesAndInterpolates)
{
    const Mesh1D m(0.0, 1.0, 9);
    for (int k = 0; k <= 5; ++k) {
        const DgField1D u = random_field(m, k);
        for (int i = 0; i < m.cells(); ++i) {
            for (int a = 0; a <= k; ++a) EXPECT_NEAR(eval(u, u.node(i, a)), u(i, a), 1e-14);
            std::vector<double> nodes(k + 1), vals(k + 1);
            for (int a = 0; a <= k; ++a) {
                nodes[a] = u.node(i, a);
                vals[a] = u(i, a);
            }
            const double x = m.interface(i) + 0.37 * m.dx();
            EXPECT_NEAR(eval(u, x), static_cast<double>(oracle::lagrange(nodes, vals, x)), 1e-12);
        }
    }
}

TEST(Eval, PeriodicShiftByOnePeriod)
{
    const Mesh1D m(0.0, 1.0, 20);
    const DgField1D u = project([](double x) { return std::sin(two_pi * x); }, m, 3);
    for (int s = 0; s < 50; ++s) {
        const double x = oracle::uniform(0.0, 1.0);
        EXPECT_NEAR(eval(u, x), eval(u, x + 1.0), 1e-14);
        EXPECT_NEAR(eval(u, x), eval(u, x - 1.0), 1e-14);
    }
}

TEST(Eval, ExtendedMeshUsesBoundaryExtension)
{
    const double K = 100.0, r = 0.10, xmin = -2.0;
    const Mesh1D m(xmin, 2.0, 16, Boundary::extended);
    const DgField1D u = project([&](double x) { return std::max(K - K * std::exp(x), 0.0); }, m, 2);
    BoundaryExtension ext;
    ext.left = [&](double t, double x) { return K * std::exp(-r * t) - K * std::exp(x); };
    ext.right = [](double, double) { return 0.0; };
    const double t = 0.1;
    EXPECT_DOUBLE_EQ(eval(u, xmin - 0.1, t, &ext), K * std::exp(-r * t) - K * std::exp(xmin - 0.1));
    EXPECT_DOUBLE_EQ(eval(u, 2.3, t, &ext), 0.0);
    EXPECT_THROW(eval(u, xmin - 0.1, t, nullptr), config_error);
    EXPECT_NEAR(eval(u, 0.3, t, &ext), u.eval_in_cell(m.locate(0.3), 0.3), 0.0);
}

TEST(Norms, ConstantsAndZero)
{
    const Mesh1D m(0.0, 1.0, 10);
    for (int k = 0; k <= 4; ++k) {
        const DgField1D c = project([](double) { return -2.5; }, m, k);
        const Norms n = norms(c);
        EXPECT_NEAR(n.l1, 2.5, 1e-13);
        EXPECT_NEAR(n.l2, 2.5, 1e-13);
        EXPECT_NEAR(n.linf, 2.5, 1e-13);
        EXPECT_NEAR(n.l1_nodes, 2.5, 1e-13);
        const Norms z = norms(DgField1D(m, k));
        EXPECT_EQ(z.l1, 0.0);
        EXPECT_EQ(z.l2, 0.0);
        EXPECT_EQ(z.linf, 0.0);
    }
}

TEST(Norms, SineHasL2RootHalf)
{
    const DgField1D u = project([](double x) { return std::sin(two_pi * x); }, Mesh1D(0.0, 1.0, 100), 3);
    EXPECT_NEAR(norms(u).l2, std::sqrt(0.5), 1e-6);
    EXPECT_NEAR(norms(u).l1, 2.0 / std::numbers::pi, 1e-6);
    EXPECT_NEAR(norms(u).linf, 1.0, 1e-3);
}

TEST(Norms, NodalL2EqualsOversampledOnVk)
{
    const Mesh1D m(0.0, 3.0, 17);
    const SpaceTimeFn zero = [](double, double) { return 0.0; };
    for (int k = 0; k <= 7; ++k) {
        const DgField1D u = random_field(m, k);
        const double nodal = error_vs(u, zero, 0.0, L2Rule::nodal).l2;
        const double over = error_vs(u, zero, 0.0, L2Rule::oversampled).l2;
        EXPECT_NEAR(nodal, over, 1e-12 * std::max(1.0, over)) << "k=" << k;
        long double sq = 0.0L;
        for (int i = 0; i < m.cells(); ++i) {
            for (int a = 0; a <= k; ++a) sq += static_cast<long double>(u.weight(a)) * u(i, a) * u(i, a);
        }
        EXPECT_NEAR(nodal, std::sqrt(static_cast<double>(sq)), 1e-13);
    }
}

TEST(ErrorVs, ExactMemberOfVkAndZeroReference)
{
    const Mesh1D m(0.0, 1.0, 12);
    const SpaceTimeFn cubic = [](double t, double x) { return t + x * x * x - 0.5 * x; };
    const DgField1D u = project([&](double x) { return cubic(0.7, x); }, m, 3);
    const Norms e = error_vs(u, cubic, 0.7);
    EXPECT_LE(e.l1, 1e-12);
    EXPECT_LE(e.l2, 1e-12);
    EXPECT_LE(e.linf, 1e-12);
    EXPECT_LE(error_vs(u, cubic, 0.7, L2Rule::oversampled).l2, 1e-12);

    const DgField1D w = random_field(m, 2);
    const Norms a = error_vs(w, [](double, double) { return 0.0; }, 0.0);
    const Norms b = norms(w);
    EXPECT_EQ(a.l1, b.l1);
    EXPECT_EQ(a.l2, b.l2);
    EXPECT_EQ(a.linf, b.linf);
}

TEST(Lincomb, Identities)
{
    const Mesh1D m(0.0, 1.0, 6);
    const DgField1D u = random_field(m, 2);
    const DgField1D one = lincomb({{1.0, &u}});
    const DgField1D half = lincomb({{0.5, &u}, {0.5, &u}});
    const DgField1D diff = lincomb({{1.0, &u}, {-1.0, &u}});
    for (std::size_t j = 0; j < u.coeffs().size(); ++j) {
        EXPECT_EQ(one.coeffs()[j], u.coeffs()[j]);
        EXPECT_EQ(half.coeffs()[j], u.coeffs()[j]);
        EXPECT_EQ(diff.coeffs()[j], 0.0);
    }
    const DgField1D other(m, 3);
    EXPECT_THROW(lincomb({{1.0, &u}, {1.0, &other}}), config_error);
}

TEST(RequireFinite, DetectsNaN)
{
    DgField1D u(Mesh1D(0.0, 1.0, 3), 1);
    EXPECT_NO_THROW(require_finite(u, "test"));
    u(1, 0) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(require_finite(u, "test"), numerical_error);
}

TEST(WriteCsv, OneRowPerNode)
{
    const DgField1D u = project([](double x) { return x; }, Mesh1D(0.0, 1.0, 2), 1);
    std::ostringstream os;
    write_csv(os, u);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "cell,alpha,x,value");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 4);
}
