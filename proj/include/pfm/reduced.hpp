#pragma once

#include "pfm/elasto_plastic.hpp"
#include "pfm/friction_params.hpp"
#include "pfm/limit_surface.hpp"
#include "pfm/math.hpp"
#include "pfm/pressure_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace pfm {

/// Diagonal scalings of the reduced model: S = diag(1, 1, r) maps the twist
/// onto equal units, U = diag(1, 1, u) scales the viscous torque.
struct ScalingMatrices {
    double r = 0.0;
    double u = 0.0;

    static ScalingMatrices from_grid(const PressureGrid& g) {
        if (!(g.r > 0.0)) throw std::invalid_argument("reduced model needs r > 0");
        return {g.r, g.u};
    }

    Vec3 scaled_twist(const Twist& v) const { return {v.vx, v.vy, r * v.omega}; }
};

/// Three-bristle state; z_tau carries an extra length factor through S.
struct ReducedBristleState {
    Vec3 z{};
};

/// Coulomb ellipsoid wrench f = -mu_C f_N S v_S / |v_S|; opposes the motion,
/// zero twist gives zero wrench.
inline Wrench ellipsoid_wrench(const Twist& v, double r, double mu_c, double f_N) {
    if (f_N < 0.0) throw std::invalid_argument("ellipsoid_wrench: f_N must be >= 0");
    const Vec3 vs{v.vx, v.vy, r * v.omega};
    const double n = norm(vs);
    if (n == 0.0) return {0.0, 0.0, 0.0};
    const double s = -mu_c * f_N / n;
    return {s * vs.x, s * vs.y, s * r * vs.z};
}

/// Ellipsoid-coupled deflection rate z' = S v_S - z sigma0 |v_S| / g(|v_S|).
inline Vec3 reduced_rate_ellipsoid(const Vec3& z, const Twist& v, const ScalingMatrices& s,
                                   const FrictionParams& p) {
    const Vec3 vs = s.scaled_twist(v);
    const double n = norm(vs);
    if (n == 0.0) return {0.0, 0.0, 0.0};
    const double coeff = p.sigma0 * n / g_curve(n, p);
    return {vs.x - z.x * coeff, vs.y - z.y * coeff, s.r * vs.z - z.z * coeff};
}

/// Limit-surface-corrected rate z' = -(S h |v_S| + z sigma0 |v_S| / g); its
/// fixed point is z* = -S h g / sigma0. The lookup returns zero at zero twist,
/// so the state freezes in stiction.
inline Vec3 reduced_rate_ls(const Vec3& z, const Twist& v, const ScalingMatrices& s,
                            const LimitSurfaceTable& table, double r, const FrictionParams& p) {
    const Vec3 vs = s.scaled_twist(v);
    const double n = norm(vs);
    if (n == 0.0) return {0.0, 0.0, 0.0};
    const auto h = lookup(table, r, v);
    const double coeff = p.sigma0 * n / g_curve(n, p);
    return {-h[0] * n - z.x * coeff, -h[1] * n - z.y * coeff, -s.r * h[2] * n - z.z * coeff};
}

/// Elasto-Plastic variant: z' = -[S h + z beta(S^-1 z, -h |v_S|) sigma0/g] |v_S|.
/// beta compares |S^-1 z| against z_max = g(|v_S|)/sigma0.
inline Vec3 reduced_rate_ls_elastoplastic(const Vec3& z, const Twist& v,
                                          const ScalingMatrices& s,
                                          const LimitSurfaceTable& table, double r,
                                          const FrictionParams& p) {
    const Vec3 vs = s.scaled_twist(v);
    const double n = norm(vs);
    if (n == 0.0) return {0.0, 0.0, 0.0};
    const auto h = lookup(table, r, v);
    const double g = g_curve(n, p);
    const Vec3 z_scaled{z.x, z.y, z.z / s.r};
    const Vec3 v_beta{-h[0] * n, -h[1] * n, -h[2] * n};
    const double beta = elasto_plastic_beta(z_scaled, v_beta, g / p.sigma0, p.s_ba);
    const double coeff = beta * p.sigma0 * n / g;
    return {-h[0] * n - z.x * coeff, -h[1] * n - z.y * coeff, -s.r * h[2] * n - z.z * coeff};
}

/// Wrench at the CoP: f = -(sigma0 z + sigma1 z' + sigma2 U v) f_N.
inline Wrench reduced_wrench(const Vec3& z, const Vec3& rate, const Twist& v,
                             const ScalingMatrices& s, const FrictionParams& p, double f_N) {
    if (f_N < 0.0) throw std::invalid_argument("reduced_wrench: f_N must be >= 0");
    return {-(p.sigma0 * z.x + p.sigma1 * rate.x + p.sigma2 * v.vx) * f_N,
            -(p.sigma0 * z.y + p.sigma1 * rate.y + p.sigma2 * v.vy) * f_N,
            -(p.sigma0 * z.z + p.sigma1 * rate.z + p.sigma2 * s.u * v.omega) * f_N};
}

} // namespace pfm
