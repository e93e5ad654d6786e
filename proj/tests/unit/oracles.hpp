#pragma once

// Reference computations for the unit tests. They share no code with the
// library: the quadrature table is hard-coded and roots are found by bisection.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// 8-point Gauss-Legendre rule on (-1,1), tabulated to 20 digits.
inline constexpr std::array<long double, 8> g8_nodes = {
    -0.96028985649753623168L, -0.79666647741362673959L, -0.52553240991632898582L, -0.18343464249564980494L,
    0.18343464249564980494L,  0.52553240991632898582L,  0.79666647741362673959L,  0.96028985649753623168L};
inline constexpr std::array<long double, 8> g8_weights = {
    0.10122853629037625915L, 0.22238103445337447054L, 0.31370664587788728734L, 0.36268378337836198297L,
    0.36268378337836198297L, 0.31370664587788728734L, 0.22238103445337447054L, 0.10122853629037625915L};

/// Composite 8-point Gauss rule with `panels` equal panels on [a, b].
inline long double integrate(const std::function<long double(long double)>& f, long double a, long double b,
                             int panels = 64)
{
    const long double h = (b - a) / panels;
    long double sum = 0.0L;
    for (int p = 0; p < panels; ++p) {
        const long double lo = a + p * h;
        for (int g = 0; g < 8; ++g) sum += g8_weights[g] * f(lo + 0.5L * h * (1.0L + g8_nodes[g]));
    }
    return 0.5L * h * sum;
}

/// Root of an increasing function g on [lo, hi] with g(lo) <= 0 <= g(hi), by bisection.
inline double bisect(const std::function<double(double)>& g, double lo, double hi)
{
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (g(mid) <= 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Lagrange polynomial through (nodes[j], values[j]) evaluated at t by the product formula.
inline long double lagrange(const std::vector<double>& nodes, const std::vector<double>& values, long double t)
{
    long double s = 0.0L;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        long double p = values[a];
        for (std::size_t b = 0; b < nodes.size(); ++b) {
            if (b != a) p *= (t - nodes[b]) / (static_cast<long double>(nodes[a]) - nodes[b]);
        }
        s += p;
    }
    return s;
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20111003);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

} // namespace oracle
