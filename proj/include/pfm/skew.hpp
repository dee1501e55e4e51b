#pragma once

#include "pfm/limit_surface.hpp"
#include "pfm/math.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pfm {

/// Fixed-point search for the rotation center p_s = (dx, dy) about which a
/// steady rotation produces zero net tangential force. Seeds the virtual
/// tangential velocity from the pure-rotation query and rescales each
/// component by (r' w h + v0)/v0 until the normalized tangential residual
/// drops below tol. Symmetric surfaces have near-zero seeds and never enter
/// the loop.
inline Vec2 find_zero_tangential_cor(const LimitSurfaceTable& table, double tol = 1e-8,
                                     int max_iter = 100) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_zero_tangential_cor: tol must be > 0");
    const double rp = table.r_prime;
    const double omega = 1.0;
    std::array<double, 3> h = lookup(table, rp, {0.0, 0.0, omega});
    const double vx0 = rp * omega * h[0];
    const double vy0 = rp * omega * h[1];
    double vx = vx0;
    double vy = vy0;
    int iter = 0;
    while (std::sqrt(h[0] * h[0] + h[1] * h[1]) > tol) {
        if (++iter > max_iter)
            throw std::runtime_error("skew iteration diverged, residual " +
                                     std::to_string(std::sqrt(h[0] * h[0] + h[1] * h[1])));
        h = lookup(table, rp, {vx, vy, omega});
        if (vx0 != 0.0) vx = vx * (rp * omega * h[0] + vx0) / vx0;
        if (vy0 != 0.0) vy = vy * (rp * omega * h[1] + vy0) / vy0;
    }
    return {-vy / omega, vx / omega};
}

/// Convenience overload that pre-computes the table from a grid first.
inline Vec2 find_zero_tangential_cor(const PressureGrid& grid, int n_ls = 20, double tol = 1e-8,
                                     int max_iter = 100) {
    const LimitSurfaceTable table = precompute(grid, n_ls);
    return find_zero_tangential_cor(table, tol, max_iter);
}

/// Skew variables from a pre-computed p_s:
///   s_x = -(r_a/r_a') s_n dy,  s_y = (r_a/r_a') s_n dx,
/// with s_n in [0,1] shrinking as the CoR leaves the neighbourhood of the CoP.
inline Vec2 skew_variables(Vec2 p_s, double r_a, double r_a_prime, const Twist& v) {
    if (!(r_a > 0.0) || !(r_a_prime > 0.0))
        throw std::invalid_argument("skew_variables: radii must be > 0");
    const double np = norm(p_s);
    if (np == 0.0) return {0.0, 0.0};
    const double tx = v.vx * p_s.x / np;
    const double ty = v.vy * p_s.y / np;
    const double s_n = 2.0 / kPi * std::atan2(std::abs(v.omega) * r_a, std::sqrt(tx * tx + ty * ty));
    const double scale = r_a / r_a_prime * s_n;
    return {-scale * p_s.y, scale * p_s.x};
}

/// Eigenvalues of the symmetrized skew force map: lambda_1 = 1 and
/// (r^2+1)/2 +- sqrt(((r^2+1)/2)^2 - (r_a^2 - s_x^2/4 - s_y^2/4)).
/// A negative discriminant yields a complex pair; real parts are reported and
/// classified. `condition` is the closed-form positivity test 4 r_a^2 > s^2.
struct EigenCheck {
    std::array<double, 3> eigenvalues{1.0, 0.0, 0.0};
    bool positive = false;
    bool complex_pair = false;
    bool condition = false;
};

inline EigenCheck check_positive_definite(double r, double r_a, double s_x, double s_y) {
    EigenCheck out;
    const double half = 0.5 * (r * r + 1.0);
    const double disc = half * half - (r_a * r_a - 0.25 * s_x * s_x - 0.25 * s_y * s_y);
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        out.eigenvalues = {1.0, half + root, half - root};
    } else {
        out.eigenvalues = {1.0, half, half}; // real parts of the complex pair
        out.complex_pair = true;
    }
    out.positive = out.eigenvalues[0] > 0.0 && out.eigenvalues[1] > 0.0 && out.eigenvalues[2] > 0.0;
    out.condition = 4.0 * r_a * r_a > s_x * s_x + s_y * s_y;
    return out;
}

} // namespace pfm
