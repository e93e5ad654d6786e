#pragma once

/// Gauss-Legendre rules on (-1,1) and the nodal Lagrange basis at their nodes.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sldg/errors.hpp"

namespace sldg {

inline constexpr int max_gauss_points = 16;

/// n-point Gauss-Legendre rule on (-1,1). Nodes ascending, weights positive.
/// Also carries the barycentric weights of the Lagrange basis on the nodes.
struct GaussRule {
    int n = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> bary;
};

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(int n, double x)
{
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) return {1.0, 0.0};
    for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

} // namespace detail

/// Builds the n-point rule by Newton iteration on P_n seeded with Chebyshev-like
/// estimates. Throws config_error unless 1 <= n <= 16.
inline GaussRule gauss_rule(int n)
{
    if (n < 1 || n > max_gauss_points) {
        throw config_error("gauss_rule: point count " + std::to_string(n) +
                           " outside [1," + std::to_string(max_gauss_points) + "]");
    }
    GaussRule rule;
    rule.n = n;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // i-th largest root
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            auto [p, d] = detail::legendre_with_derivative(n, x);
            dp = d;
            const double step = p / d;
            x -= step;
            if (std::abs(step) < 1e-17) break;
        }
        dp = detail::legendre_with_derivative(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
        const double dp = detail::legendre_with_derivative(n, 0.0).second;
        rule.weights[n / 2] = 2.0 / (dp * dp);
    }

    rule.bary.assign(n, 1.0);
    for (int j = 0; j < n; ++j) {
        double prod = 1.0;
        for (int m = 0; m < n; ++m) {
            if (m != j) prod *= rule.nodes[j] - rule.nodes[m];
        }
        rule.bary[j] = 1.0 / prod;
    }
    return rule;
}

/// Shared immutable rules for n = 1..16, built once.
inline const GaussRule& cached_gauss_rule(int n)
{
    static const std::array<GaussRule, max_gauss_points> table = [] {
        std::array<GaussRule, max_gauss_points> t;
        for (int m = 1; m <= max_gauss_points; ++m) t[m - 1] = gauss_rule(m);
        return t;
    }();
    if (n < 1 || n > max_gauss_points) {
        throw config_error("cached_gauss_rule: point count " + std::to_string(n) + " out of range");
    }
    return table[n - 1];
}

/// phi_alpha(t) = prod_{beta != alpha} (t - x_beta)/(x_alpha - x_beta). Any real t.
inline double lagrange_basis_at(const GaussRule& rule, int alpha, double t)
{
    double v = 1.0;
    for (int beta = 0; beta < rule.n; ++beta) {
        if (beta == alpha) continue;
        v *= (t - rule.nodes[beta]) / (rule.nodes[alpha] - rule.nodes[beta]);
    }
    return v;
}

/// Fills out[0..n) with phi_alpha(t) using the modified (first) barycentric form.
inline void lagrange_basis_all(const GaussRule& rule, double t, std::span<double> out)
{
    const int n = rule.n;
    double ell = 1.0;
    for (int j = 0; j < n; ++j) {
        const double d = t - rule.nodes[j];
        if (d == 0.0) {
            for (int m = 0; m < n; ++m) out[m] = (m == j) ? 1.0 : 0.0;
            return;
        }
        ell *= d;
    }
    for (int j = 0; j < n; ++j) out[j] = ell * rule.bary[j] / (t - rule.nodes[j]);
}

/// sum_alpha values[alpha] * phi_alpha(t).
inline double lagrange_eval(const GaussRule& rule, std::span<const double> values, double t)
{
    const int n = rule.n;
    double ell = 1.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double d = t - rule.nodes[j];
        if (d == 0.0) return values[j];
        ell *= d;
        acc += rule.bary[j] * values[j] / d;
    }
    return ell * acc;
}

} // namespace sldg
