#pragma once

#include "pfm/math.hpp"
#include "pfm/surface.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace pfm {

/// Discretized contact patch. Cell coordinates are relative to the center of
/// pressure, so every force/torque sum can use them as lever arms directly.
/// p_n is the load-normalized pressure: sum(p_n * cell_area) == 1 and the
/// physical pressure is f_N * p_n. Immutable after construction.
struct PressureGrid {
    int n = 0;              // cells per side
    double hx = 0.0;        // cell pitch [m]
    double hy = 0.0;
    double cell_area = 0.0; // hx * hy [m^2]
    double x0 = 0.0;        // center of cell (0,0), CoP frame
    double y0 = 0.0;
    std::vector<double> cx; // n*n cell centers, row-major (iy * n + ix)
    std::vector<double> cy;
    std::vector<double> pn; // normalized pressure [1/m^2]
    std::vector<int> active; // indices of cells with pn > 0, row-major order
    double f_N = 0.0;       // total normal load [N]
    Vec2 cop{};             // CoP in the spec's centered frame (before the shift)
    double r = 0.0;         // equivalent rim radius [m]
    double u = 0.0;         // viscous scale [m^2]

    int index(int ix, int iy) const { return iy * n + ix; }

    bool contains(double x, double y) const {
        return x >= x0 - 0.5 * hx && x <= x0 + (n - 0.5) * hx &&
               y >= y0 - 0.5 * hy && y <= y0 + (n - 0.5) * hy;
    }
};

/// r = |sum rho x v_pr_hat * p_n * A| with v_pr_hat the unit velocity of pure
/// rotation about the CoP; the integrand collapses to |rho|, and cells at the
/// CoP contribute nothing.
inline double equivalent_radius(const PressureGrid& g) {
    KahanSum s;
    for (int i : g.active) s.add(std::sqrt(g.cx[i] * g.cx[i] + g.cy[i] * g.cy[i]) * g.pn[i] * g.cell_area);
    return s.value();
}

/// u = sum |rho|^2 p_n A, the torque scale of linear viscous friction.
inline double viscous_scale(const PressureGrid& g) {
    KahanSum s;
    for (int i : g.active) s.add((g.cx[i] * g.cx[i] + g.cy[i] * g.cy[i]) * g.pn[i] * g.cell_area);
    return s.value();
}

namespace detail {

// Raw (unnormalized) pressure weight at a cell center. Line shapes are
// handled by the caller since they need the pitch to pick the center row.
inline double sample_shape(const SurfaceSpec& spec, double x, double y, double f_N) {
    switch (spec.shape) {
    case ShapeKind::Circle:
        return x * x + y * y <= spec.size * spec.size ? 1.0 : 0.0;
    case ShapeKind::Square:
        return std::abs(x) <= 0.5 * spec.size && std::abs(y) <= 0.5 * spec.size ? 1.0 : 0.0;
    case ShapeKind::Hertzian: {
        const double a = hertzian_radius(f_N, spec.hertz.radius_coeff);
        return hertzian_pressure(std::sqrt(x * x + y * y), f_N, a, spec.hertz_exponent(f_N));
    }
    case ShapeKind::NonConvex1:
    case ShapeKind::NonConvex2:
        return bundled_mask(spec.shape).nearest(x, y);
    case ShapeKind::Custom:
        return spec.mask.nearest(x, y);
    default:
        return 0.0;
    }
}

inline void shape_extent(const SurfaceSpec& spec, double f_N, double& half_x, double& half_y) {
    switch (spec.shape) {
    case ShapeKind::Circle:
        half_x = half_y = spec.size;
        return;
    case ShapeKind::Square:
    case ShapeKind::Line:
    case ShapeKind::GradientLine:
        half_x = half_y = 0.5 * spec.size;
        return;
    case ShapeKind::Hertzian:
        half_x = half_y = hertzian_radius(f_N, spec.hertz.radius_coeff);
        return;
    case ShapeKind::NonConvex1:
    case ShapeKind::NonConvex2:
    case ShapeKind::Custom: {
        const PressureMask& m =
            spec.shape == ShapeKind::Custom ? spec.mask : bundled_mask(spec.shape);
        double lx, hx_, ly, hy_;
        m.bounds(lx, hx_, ly, hy_);
        const double half = std::max({std::abs(lx), std::abs(hx_), std::abs(ly), std::abs(hy_)});
        half_x = half_y = half;
        return;
    }
    }
    throw std::logic_error("unhandled shape");
}

} // namespace detail

/// Samples the pressure at cell centers on an n x n grid over the shape's
/// bounding box, renormalizes so sum(p_n A) = 1 exactly, then re-centers the
/// coordinates on the CoP.
inline PressureGrid discretize(const SurfaceSpec& spec, int n, double f_N) {
    if (n < 2) throw std::invalid_argument("discretize: need n >= 2");
    if (!(f_N > 0.0)) throw std::invalid_argument("discretize: need f_N > 0");

    double half_x = 0.0, half_y = 0.0;
    detail::shape_extent(spec, f_N, half_x, half_y);

    PressureGrid g;
    g.n = n;
    g.hx = 2.0 * half_x / n;
    g.hy = 2.0 * half_y / n;
    g.cell_area = g.hx * g.hy;
    g.f_N = f_N;
    g.cx.resize(std::size_t(n) * n);
    g.cy.resize(std::size_t(n) * n);
    g.pn.resize(std::size_t(n) * n);

    const bool is_line = spec.shape == ShapeKind::Line || spec.shape == ShapeKind::GradientLine;
    const int line_row = (n - 1) / 2; // row nearest y = 0

    KahanSum total;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const int i = g.index(ix, iy);
            const double x = -half_x + (ix + 0.5) * g.hx;
            const double y = -half_y + (iy + 0.5) * g.hy;
            g.cx[i] = x;
            g.cy[i] = y;
            double w = 0.0;
            if (is_line) {
                if (iy == line_row && std::abs(x) <= 0.5 * spec.size) {
                    w = spec.shape == ShapeKind::Line ? 1.0 : (x + 0.5 * spec.size);
                }
            } else {
                w = detail::sample_shape(spec, x, y, f_N);
            }
            if (w < 0.0) throw std::runtime_error("negative pressure sample");
            g.pn[i] = w;
            total.add(w * g.cell_area);
        }
    }
    if (!(total.value() > 0.0)) throw std::runtime_error("empty contact");

    const double inv_total = 1.0 / total.value();
    KahanSum mx, my;
    for (std::size_t i = 0; i < g.pn.size(); ++i) {
        g.pn[i] *= inv_total;
        if (g.pn[i] > 0.0) {
            g.active.push_back(int(i));
            mx.add(g.cx[i] * g.pn[i] * g.cell_area);
            my.add(g.cy[i] * g.pn[i] * g.cell_area);
        }
    }
    g.cop = {mx.value(), my.value()};
    for (std::size_t i = 0; i < g.pn.size(); ++i) {
        g.cx[i] -= g.cop.x;
        g.cy[i] -= g.cop.y;
    }
    g.x0 = g.cx[0];
    g.y0 = g.cy[0];
    g.r = equivalent_radius(g);
    g.u = viscous_scale(g);
    return g;
}

/// Builds a one-cell grid at the CoP; the degenerate case where the planar
/// model must collapse to the scalar LuGre equations.
inline PressureGrid single_cell_grid(double cell_area, double f_N) {
    PressureGrid g;
    g.n = 1;
    g.hx = g.hy = std::sqrt(cell_area);
    g.cell_area = cell_area;
    g.f_N = f_N;
    g.cx = {0.0};
    g.cy = {0.0};
    g.pn = {1.0 / cell_area};
    g.active = {0};
    g.x0 = g.y0 = 0.0;
    g.r = 0.0;
    g.u = 0.0;
    return g;
}

inline void write_grid_csv(const PressureGrid& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x,y,pn\n";
    char buf[128];
    for (std::size_t i = 0; i < g.pn.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.cx[i], g.cy[i], g.pn[i]);
        out << buf;
    }
}

} // namespace pfm
