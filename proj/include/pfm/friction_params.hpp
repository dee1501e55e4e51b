#pragma once

#include <cmath>
#include <stdexcept>

namespace pfm {

/// LuGre / Elasto-Plastic coefficient set. sigma0 [1/m], sigma1 and sigma2
/// [s/m], v_s [m/s]; the rest dimensionless. Forces are obtained by
/// multiplying with the normal load, so the coefficients are load-normalized.
struct FrictionParams {
    double sigma0 = 1e6;
    double sigma1 = 8e2;
    double sigma2 = 0.0;
    double mu_c = 1.0;
    double mu_s = 1.0;
    double gamma = 2.0;
    double v_s = 1e-3;
    double s_ba = 0.9;
    bool elasto_plastic = false;

    void validate() const {
        if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
        if (!(mu_c > 0.0) || !(mu_s >= mu_c)) throw std::invalid_argument("need mu_s >= mu_c > 0");
        if (!(v_s > 0.0)) throw std::invalid_argument("v_s must be > 0");
        if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
        if (!(s_ba >= 0.0 && s_ba < 1.0)) throw std::invalid_argument("need 0 <= s_ba < 1");
        if (sigma1 < 0.0 || sigma2 < 0.0) throw std::invalid_argument("sigma1, sigma2 must be >= 0");
    }

    /// Coulomb preset (row p=0): no Stribeck, no viscous term.
    static FrictionParams p0() {
        FrictionParams p;
        p.sigma0 = 1e6;
        p.sigma1 = 8e2;
        p.sigma2 = 0.0;
        p.mu_c = 1.0;
        p.mu_s = 1.0;
        p.gamma = 2.0;
        p.v_s = 1e-3;
        p.s_ba = 0.9;
        return p;
    }

    /// Stribeck + viscous preset (row p=1).
    static FrictionParams p1() {
        FrictionParams p = p0();
        p.sigma2 = 0.2;
        p.mu_s = 1.2;
        return p;
    }
};

/// Steady-state friction coefficient g(v) = mu_C + (mu_S - mu_C) exp(-(v/v_s)^gamma).
inline double g_curve(double speed, const FrictionParams& p) {
    if (p.mu_s == p.mu_c) return p.mu_c;
    double e;
    if (p.gamma == 2.0) {
        const double s = speed / p.v_s;
        e = std::exp(-s * s);
    } else {
        e = std::exp(-std::pow(speed / p.v_s, p.gamma));
    }
    return p.mu_c + (p.mu_s - p.mu_c) * e;
}

/// Maximum (steady-state) bristle deflection z_max = g(v)/sigma0.
inline double z_max_deflection(double speed, const FrictionParams& p) {
    return g_curve(speed, p) / p.sigma0;
}

} // namespace pfm
