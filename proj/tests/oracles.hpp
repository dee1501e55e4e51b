// Test-only reference implementations, kept independent of the library's
// evaluation paths: a scalar amended-LuGre / Elasto-Plastic integrator
// following the one-dimensional equations directly, and a plain RK4 stepper.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

struct ScalarParams {
    double sigma0 = 1e6;
    double sigma1 = 8e2;
    double sigma2 = 0.0;
    double mu_c = 1.0;
    double mu_s = 1.0;
    double gamma = 2.0;
    double v_s = 1e-3;
    double s_ba = 0.9;
    bool elasto_plastic = false;
};

inline double scalar_g(double v, const ScalarParams& p) {
    return p.mu_c + (p.mu_s - p.mu_c) * std::exp(-std::pow(std::abs(v) / p.v_s, p.gamma));
}

// 1D Elasto-Plastic switching function with the sign cases spelled out.
inline double scalar_alpha(double z, double v, const ScalarParams& p) {
    if (v == 0.0 || z == 0.0) return 0.0;
    if ((v > 0.0) != (z > 0.0)) return 0.0;
    const double z_max = scalar_g(v, p) / p.sigma0;
    const double z_ba = p.s_ba * z_max;
    const double az = std::abs(z);
    if (az <= z_ba) return 0.0;
    if (az >= z_max) return 1.0;
    return 0.5 * std::sin(M_PI * (az - 0.5 * (z_max + z_ba)) / (z_max - z_ba)) + 0.5;
}

inline double scalar_zdot(double z, double v, const ScalarParams& p) {
    if (v == 0.0) return 0.0;
    const double factor = p.elasto_plastic ? scalar_alpha(z, v, p) : 1.0;
    return v - z * factor * p.sigma0 * std::abs(v) / scalar_g(v, p);
}

inline double scalar_force(double z, double zdot, double v, double f_N, const ScalarParams& p) {
    return -(p.sigma0 * z + p.sigma1 * zdot + p.sigma2 * v) * f_N;
}

// Integrates the scalar bristle along an imposed velocity signal with plain
// RK4 and records the friction force at every step.
struct ScalarTrace {
    std::vector<double> t;
    std::vector<double> f;
    std::vector<double> z;
};

inline ScalarTrace integrate_scalar(const std::function<double(double)>& velocity, double f_N,
                                    const ScalarParams& p, double duration, double dt) {
    ScalarTrace out;
    double z = 0.0;
    const long n = std::lround(duration / dt);
    for (long k = 0; k <= n; ++k) {
        const double t = k * dt;
        const double v = velocity(t);
        const double zd = scalar_zdot(z, v, p);
        out.t.push_back(t);
        out.z.push_back(z);
        out.f.push_back(scalar_force(z, zd, v, f_N, p));
        if (k == n) break;
        const double k1 = scalar_zdot(z, velocity(t), p);
        const double k2 = scalar_zdot(z + 0.5 * dt * k1, velocity(t + 0.5 * dt), p);
        const double k3 = scalar_zdot(z + 0.5 * dt * k2, velocity(t + 0.5 * dt), p);
        const double k4 = scalar_zdot(z + dt * k3, velocity(t + dt), p);
        z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

} // namespace oracle
