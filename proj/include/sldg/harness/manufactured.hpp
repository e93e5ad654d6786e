#pragma once

/// Manufactured right-hand sides and their derivatives for the variable-coefficient
/// diffusion experiments:
///   1D: v = sin(2 pi t) cos(2 pi (x - t)), sigma = sin(2 pi x), f = v_t - sigma^2/2 v_xx;
///   2D: u = cos(t) sin(2x) sin(x + y), sigma = [[cos x, cos 2x], [0, sin y]],
///       f = u_t - 1/2 Tr(sigma sigma^T D^2 u).

#include <cmath>
#include <numbers>

namespace sldg::manufactured {

using std::cos;
using std::pow;
using std::sin;
inline constexpr double k_pi = std::numbers::pi;

inline double variable_sigma_f(double t, double x)
{
    const double x0 = 2*t;
    const double x1 = -2*x + x0;
    const double x2 = -k_pi*x1;
    const double x3 = k_pi*x0;
    const double x4 = sin(x3);
    const double x5 = 2*k_pi;
    return x4*x5*sin(x2) + 2*pow(k_pi, 2)*x4*pow(sin(2*k_pi*x), 2)*cos(k_pi*x1) + x5*cos(x2)*cos(x3);
}

inline double variable_sigma_f_t(double t, double x)
{
    const double x0 = 2*t;
    const double x1 = -2*x + x0;
    const double x2 = -k_pi*x1;
    const double x3 = k_pi*x0;
    const double x4 = sin(x3);
    const double x5 = pow(k_pi, 2);
    const double x6 = cos(x3);
    const double x7 = k_pi*x1;
    const double x8 = pow(k_pi, 3);
    const double x9 = pow(sin(2*k_pi*x), 2);
    return -8*x4*x5*cos(x2) - 4*x4*x8*x9*sin(x7) + 8*x5*x6*sin(x2) + 4*x6*x8*x9*cos(x7);
}

inline double variable_sigma_f_x(double t, double x)
{
    const double x0 = 2*t;
    const double x1 = -2*x + x0;
    const double x2 = -k_pi*x1;
    const double x3 = k_pi*x0;
    const double x4 = sin(x3);
    const double x5 = 4*pow(k_pi, 2);
    const double x6 = 2*k_pi*x;
    const double x7 = sin(x6);
    const double x8 = k_pi*x1;
    const double x9 = pow(k_pi, 3)*x4;
    return x4*x5*cos(x2) - x5*sin(x2)*cos(x3) + 4*pow(x7, 2)*x9*sin(x8) + 8*x7*x9*cos(x6)*cos(x8);
}

inline double variable_sigma_f_xx(double t, double x)
{
    const double x0 = 2*t;
    const double x1 = k_pi*x0;
    const double x2 = sin(x1);
    const double x3 = 2*x;
    const double x4 = k_pi*(x0 - x3);
    const double x5 = x2*sin(x4);
    const double x6 = cos(x4);
    const double x7 = k_pi*x3;
    const double x8 = sin(x7);
    const double x9 = k_pi*x2*x6;
    const double x10 = cos(x7);
    return 8*pow(k_pi, 3)*(2*pow(x10, 2)*x9 + 4*k_pi*x10*x5*x8 + x5 - x6*cos(x1) - 3*pow(x8, 2)*x9);
}

inline double variable_2d_f(double t, double x, double y)
{
    const double x0 = 2*x;
    const double x1 = sin(x0);
    const double x2 = x + y;
    const double x3 = sin(x2);
    const double x4 = x1*x3;
    const double x5 = cos(t);
    const double x6 = sin(y);
    const double x7 = cos(x0);
    const double x8 = cos(x2);
    return (1.0/2.0)*x1*x3*x5*pow(x6, 2) - x4*sin(t) - x5*x6*x7*(-x4 + 2*x7*x8) - 1.0/2.0*x5*(-5*x4 + 4*x7*x8)*(pow(x7, 2) + pow(cos(x), 2));
}

inline double variable_2d_f_t(double t, double x, double y)
{
    const double x0 = 2*x;
    const double x1 = x + y;
    const double x2 = sin(x0)*sin(x1);
    const double x3 = sin(y);
    const double x4 = sin(t);
    const double x5 = (1.0/2.0)*x4;
    const double x6 = cos(x0);
    const double x7 = cos(x1);
    return -x2*pow(x3, 2)*x5 - x2*cos(t) + x3*x4*x6*(-x2 + 2*x6*x7) + x5*(-5*x2 + 4*x6*x7)*(pow(x6, 2) + pow(cos(x), 2));
}

inline double variable_2d_f_x(double t, double x, double y)
{
    const double x0 = sin(t);
    const double x1 = 2*x;
    const double x2 = sin(x1);
    const double x3 = x + y;
    const double x4 = cos(x3);
    const double x5 = x2*x4;
    const double x6 = sin(x3);
    const double x7 = cos(x1);
    const double x8 = x6*x7;
    const double x9 = cos(t);
    const double x10 = sin(y);
    const double x11 = pow(x10, 2);
    const double x12 = x2*x6;
    const double x13 = cos(x);
    const double x14 = (1.0/2.0)*x9;
    return -x0*x5 - 2*x0*x8 + 2*x10*x2*x9*(-x12 + 2*x4*x7) - x10*x7*x9*(-5*x5 - 4*x8) + (1.0/2.0)*x11*x2*x4*x9 + x11*x6*x7*x9 - x14*(-5*x12 + 4*x4*x7)*(-2*x13*sin(x) - 4*x2*x7) - x14*(pow(x13, 2) + pow(x7, 2))*(-13*x5 - 14*x8);
}

inline double variable_2d_f_y(double t, double x, double y)
{
    const double x0 = 2*x;
    const double x1 = sin(x0);
    const double x2 = x + y;
    const double x3 = cos(x2);
    const double x4 = x1*x3;
    const double x5 = cos(t);
    const double x6 = sin(y);
    const double x7 = cos(y);
    const double x8 = sin(x2);
    const double x9 = cos(x0);
    const double x10 = x5*x9;
    const double x11 = x8*x9;
    return (1.0/2.0)*x1*x3*x5*pow(x6, 2) + x1*x5*x6*x7*x8 - x10*x6*(-2*x11 - x4) - x10*x7*(-x1*x8 + 2*x3*x9) - x4*sin(t) - 1.0/2.0*x5*(-4*x11 - 5*x4)*(pow(x9, 2) + pow(cos(x), 2));
}

inline double variable_2d_f_xx(double t, double x, double y)
{
    const double x0 = sin(t);
    const double x1 = 2*x;
    const double x2 = sin(x1);
    const double x3 = x + y;
    const double x4 = sin(x3);
    const double x5 = cos(x1);
    const double x6 = cos(x3);
    const double x7 = x5*x6;
    const double x8 = 4*x7;
    const double x9 = x2*x4;
    const double x10 = cos(t);
    const double x11 = sin(y);
    const double x12 = pow(x11, 2);
    const double x13 = x10*x11;
    const double x14 = x13*x5;
    const double x15 = x2*x6;
    const double x16 = x4*x5;
    const double x17 = cos(x);
    const double x18 = pow(x17, 2);
    const double x19 = pow(x5, 2);
    const double x20 = sin(x);
    return 5*x0*x2*x4 - x0*x8 + 2*x10*x12*x5*x6 - 5.0/2.0*x10*x12*x9 - 2*x10*(13*x15 + 14*x16)*(x17*x20 + 2*x2*x5) - 1.0/2.0*x10*(x18 + x19)*(-40*x7 + 41*x9) + x10*(-x8 + 5*x9)*(-x18 - 4*x19 + 4*pow(x2, 2) + pow(x20, 2)) - 4*x13*x2*(5*x15 + 4*x16) - x14*(-14*x7 + 13*x9) - 4*x14*(-2*x7 + x9);
}

inline double variable_2d_f_xy(double t, double x, double y)
{
    const double x0 = sin(t);
    const double x1 = 2*x;
    const double x2 = sin(x1);
    const double x3 = x + y;
    const double x4 = sin(x3);
    const double x5 = cos(x3);
    const double x6 = cos(x1);
    const double x7 = 2*x6;
    const double x8 = x5*x7;
    const double x9 = sin(y);
    const double x10 = pow(x9, 2);
    const double x11 = x2*x4;
    const double x12 = cos(t);
    const double x13 = (1.0/2.0)*x12;
    const double x14 = cos(y);
    const double x15 = 2*x2;
    const double x16 = 4*x6;
    const double x17 = x12*x9;
    const double x18 = x2*x5;
    const double x19 = x16*x4 + 5*x18;
    const double x20 = cos(x);
    return x0*x2*x4 - x0*x8 - x10*x11*x13 + x10*x12*x5*x6 - x12*x14*x15*(x11 - x8) + x12*x14*x19*x6 + x12*x14*x2*x5*x9 + 2*x12*x14*x4*x6*x9 - x12*x19*(x2*x7 + x20*sin(x)) - x13*(13*x11 - 14*x5*x6)*(pow(x20, 2) + pow(x6, 2)) - x15*x17*(x18 + x4*x7) - x17*x6*(5*x11 - x16*x5);
}

inline double variable_2d_f_yy(double t, double x, double y)
{
    const double x0 = 2*x;
    const double x1 = sin(x0);
    const double x2 = x + y;
    const double x3 = sin(x2);
    const double x4 = x1*x3;
    const double x5 = cos(y);
    const double x6 = cos(t);
    const double x7 = x4*x6;
    const double x8 = sin(y);
    const double x9 = cos(x2);
    const double x10 = x1*x9;
    const double x11 = cos(x0);
    const double x12 = x11*x9;
    const double x13 = 2*x11;
    const double x14 = x13*x6;
    return 2*x10*x5*x6*x8 + x14*x5*(x10 + x13*x3) - x14*x8*(-2*x12 + x4) + x4*sin(t) + pow(x5, 2)*x7 - 1.0/2.0*x6*(pow(x11, 2) + pow(cos(x), 2))*(-4*x12 + 5*x4) - 3.0/2.0*x7*pow(x8, 2);
}

} // namespace sldg::manufactured
