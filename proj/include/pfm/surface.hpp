#pragma once

#include "pfm/math.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pfm {

/// Scattered lattice of pressure samples (x [m], y [m], p [arbitrary weight]).
/// Points with p = 0 matter: nearest-sample queries must be able to land on
/// empty regions of a non-convex outline.
struct PressureMask {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> p;

    bool empty() const { return x.empty(); }

    void bounds(double& lo_x, double& hi_x, double& lo_y, double& hi_y) const {
        lo_x = lo_y = 1e300;
        hi_x = hi_y = -1e300;
        for (std::size_t i = 0; i < x.size(); ++i) {
            lo_x = std::min(lo_x, x[i]);
            hi_x = std::max(hi_x, x[i]);
            lo_y = std::min(lo_y, y[i]);
            hi_y = std::max(hi_y, y[i]);
        }
    }

    double nearest(double qx, double qy) const {
        double best = 1e300;
        double val = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double dx = x[i] - qx;
            const double dy = y[i] - qy;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best) {
                best = d2;
                val = p[i];
            }
        }
        return val;
    }
};

/// Loads a pressure mask from CSV with a required "x,y,p" header line.
inline PressureMask load_mask_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mask file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty mask file: " + path);
    if (line.find("x") == std::string::npos || line.find("p") == std::string::npos)
        throw std::runtime_error("mask CSV must start with an x,y,p header: " + path);
    PressureMask m;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        double v[3];
        for (int k = 0; k < 3; ++k) {
            if (!std::getline(ss, tok, ',')) throw std::runtime_error("bad mask row: " + line);
            v[k] = std::stod(tok);
        }
        m.x.push_back(v[0]);
        m.y.push_back(v[1]);
        m.p.push_back(v[2]);
    }
    if (m.empty()) throw std::runtime_error("mask file has no samples: " + path);
    return m;
}

/// Directory holding the bundled masks; overridable at runtime via the
/// PFM_DATA_DIR environment variable.
inline std::string default_data_dir() {
    if (const char* env = std::getenv("PFM_DATA_DIR")) return env;
#ifdef PFM_DATA_DIR
    return PFM_DATA_DIR;
#else
    return "data";
#endif
}

enum class ShapeKind {
    Circle,       // uniform pressure disc, parameter = radius
    Square,       // uniform pressure square, parameter = side
    Line,         // uniform line contact along x, parameter = length
    GradientLine, // line contact with pressure growing linearly in +x
    NonConvex1,   // bundled sampled mask
    NonConvex2,   // bundled sampled mask
    Hertzian,     // load-dependent circular contact
    Custom,       // caller-provided sampled mask
};

enum class HertzKMode { Constant, ForceProportional };

/// Hertzian-style contact: radius a = radius_coeff * f_N^(1/3) and pressure
/// 1.144 f_N/(pi a^2) [1 - (|rho|/a)^k]^(1/k). The exponent is either fixed
/// or k = c * f_N. radius_coeff is in m * N^(-1/3); the bare coefficient "6"
/// of the source convention corresponds to 6e-3 here (millimetres).
struct HertzianSpec {
    HertzKMode k_mode = HertzKMode::Constant;
    double k = 2.0;            // exponent when Constant
    double c = 2.0;            // exponent per newton when ForceProportional [1/N]
    double radius_coeff = 6e-3; // m / N^(1/3)
};

/// Contact radius a = radius_coeff * f_N^(1/3).
inline double hertzian_radius(double f_N, double radius_coeff) {
    if (!(f_N > 0.0)) throw std::invalid_argument("hertzian_radius: f_N must be > 0");
    return radius_coeff * std::cbrt(f_N);
}

/// Unnormalized Hertzian pressure at center distance rho; the grid
/// discretization renormalizes, so the 1.144 front factor only fixes the
/// reported peak value.
inline double hertzian_pressure(double rho, double f_N, double a, double k) {
    if (rho > a) return 0.0;
    const double t = rho / a;
    return 1.144 * f_N / (kPi * a * a) * std::pow(1.0 - std::pow(t, k), 1.0 / k);
}

struct SurfaceSpec {
    ShapeKind shape = ShapeKind::Circle;
    double size = 0.01; // radius / side / length [m], unused for Hertzian/Custom
    HertzianSpec hertz{};
    PressureMask mask{}; // Custom only; NonConvex1/2 load the bundled file lazily

    static SurfaceSpec circle(double radius) { return make(ShapeKind::Circle, radius); }
    static SurfaceSpec square(double side) { return make(ShapeKind::Square, side); }
    static SurfaceSpec line(double length) { return make(ShapeKind::Line, length); }
    static SurfaceSpec gradient_line(double length) { return make(ShapeKind::GradientLine, length); }
    static SurfaceSpec non_convex(int which) {
        SurfaceSpec s;
        s.shape = which == 1 ? ShapeKind::NonConvex1 : ShapeKind::NonConvex2;
        s.size = 0.0;
        return s;
    }
    static SurfaceSpec hertzian(HertzianSpec h) {
        if (!(h.radius_coeff > 0.0)) throw std::invalid_argument("radius_coeff must be > 0");
        if (h.k_mode == HertzKMode::Constant && !(h.k > 0.0))
            throw std::invalid_argument("Hertzian k must be > 0");
        if (h.k_mode == HertzKMode::ForceProportional && !(h.c > 0.0))
            throw std::invalid_argument("Hertzian c must be > 0");
        SurfaceSpec s;
        s.shape = ShapeKind::Hertzian;
        s.size = 0.0;
        s.hertz = h;
        return s;
    }
    static SurfaceSpec custom(PressureMask m) {
        if (m.empty()) throw std::invalid_argument("custom surface needs a non-empty mask");
        SurfaceSpec s;
        s.shape = ShapeKind::Custom;
        s.size = 0.0;
        s.mask = std::move(m);
        return s;
    }

    /// True when the contact geometry itself changes with the normal load.
    bool force_dependent_shape() const { return shape == ShapeKind::Hertzian; }

    /// True when the pressure profile (not just the scale) changes with f_N.
    bool force_dependent_distribution() const {
        return shape == ShapeKind::Hertzian && hertz.k_mode == HertzKMode::ForceProportional;
    }

    double hertz_exponent(double f_N) const {
        return hertz.k_mode == HertzKMode::Constant ? hertz.k : hertz.c * f_N;
    }

  private:
    static SurfaceSpec make(ShapeKind kind, double size) {
        if (!(size > 0.0)) throw std::invalid_argument("surface size must be > 0");
        SurfaceSpec s;
        s.shape = kind;
        s.size = size;
        return s;
    }
};

inline const PressureMask& bundled_mask(ShapeKind kind) {
    static PressureMask nc1 = load_mask_csv(default_data_dir() + "/nonconvex1.csv");
    static PressureMask nc2 = load_mask_csv(default_data_dir() + "/nonconvex2.csv");
    return kind == ShapeKind::NonConvex1 ? nc1 : nc2;
}

} // namespace pfm
