#pragma once

#include "pfm/math.hpp"

#include <cmath>

namespace pfm {

/// Smooth elastic-to-plastic transition on [z_ba, z_max]:
/// 1/2 sin(pi (w - (z_max + z_ba)/2)/(z_max - z_ba)) + 1/2.
inline double elasto_plastic_alpha(double deflection, double z_ba, double z_max) {
    return 0.5 * std::sin(kPi * (deflection - 0.5 * (z_max + z_ba)) / (z_max - z_ba)) + 0.5;
}

/// Magnitude part of the multi-dimensional Elasto-Plastic factor:
/// 0 below breakaway, sinusoidal blend up to z_max, 1 beyond.
inline double elasto_plastic_beta_bar(double deflection, double z_max, double s_ba) {
    const double z_ba = s_ba * z_max;
    if (deflection <= z_ba) return 0.0;
    if (deflection >= z_max) return 1.0;
    return elasto_plastic_alpha(deflection, z_ba, z_max);
}

// Full factor beta = eps(z_hat, v_hat) * beta_bar(|z|), where
// eps = (v_hat . z_hat + 1)/2 is the cosine-similarity alignment.
// beta_bar is checked first so z_hat is never formed at z = 0, and a zero
// velocity yields 0 (no plastic flow without motion).
template <class V>
double elasto_plastic_beta(const V& z, const V& v, double z_max, double s_ba) {
    const double nz = norm(z);
    const double bbar = elasto_plastic_beta_bar(nz, z_max, s_ba);
    if (bbar == 0.0) return 0.0;
    const double nv = norm(v);
    if (nv == 0.0) return 0.0;
    const double eps = (dot(v, z) / (nv * nz) + 1.0) * 0.5;
    return eps * bbar;
}

} // namespace pfm
