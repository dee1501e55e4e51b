#pragma once

#include "pfm/elasto_plastic.hpp"
#include "pfm/friction_params.hpp"
#include "pfm/math.hpp"
#include "pfm/pressure_grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace pfm {

/// Per-cell tangential bristle deflections, same row-major layout as the grid.
struct BristleField {
    int n = 0;
    std::vector<double> zx;
    std::vector<double> zy;

    explicit BristleField(int n_ = 0)
        : n(n_), zx(std::size_t(n_) * n_, 0.0), zy(std::size_t(n_) * n_, 0.0) {}

    std::size_t cells() const { return zx.size(); }
};

/// Rigid-motion velocity at a cell: v_t = (v_x - omega y, v_y + omega x).
inline Vec2 cell_velocity(const Twist& v, double x, double y) {
    return {v.vx - v.omega * y, v.vy + v.omega * x};
}

/// Active cells of a grid gathered into dense arrays. Cells with zero
/// pressure never deflect, so simulations integrate only these. w = p_n * A.
struct PackedContact {
    std::vector<int> idx; // original row-major cell indices
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;
    double f_N = 0.0;

    std::size_t size() const { return idx.size(); }

    static PackedContact from(const PressureGrid& g) {
        PackedContact c;
        c.idx.reserve(g.active.size());
        c.x.reserve(g.active.size());
        c.y.reserve(g.active.size());
        c.w.reserve(g.active.size());
        for (int i : g.active) {
            c.idx.push_back(i);
            c.x.push_back(g.cx[i]);
            c.y.push_back(g.cy[i]);
            c.w.push_back(g.pn[i] * g.cell_area);
        }
        c.f_N = g.f_N;
        return c;
    }
};

// Deflection rate on packed state [zx[0..m) | zy[0..m)]:
// z_t' = v_t - z_t * B * sigma0 |v_t| / g(|v_t|), B = 1 or beta(z_t, v_t).
// The relaxation term is exactly zero at |v_t| = 0.
inline void rate_packed(const Twist& v, const double* z, const PackedContact& c,
                        const FrictionParams& p, double* rate) {
    const std::size_t m = c.size();
    const double* zx = z;
    const double* zy = z + m;
    double* rx = rate;
    double* ry = rate + m;
    const bool ep = p.elasto_plastic;
    for (std::size_t i = 0; i < m; ++i) {
        const double vtx = v.vx - v.omega * c.y[i];
        const double vty = v.vy + v.omega * c.x[i];
        const double speed = std::sqrt(vtx * vtx + vty * vty);
        if (speed == 0.0) {
            rx[i] = 0.0;
            ry[i] = 0.0;
            continue;
        }
        const double g = g_curve(speed, p);
        double coeff = p.sigma0 * speed / g;
        if (ep) {
            coeff *= elasto_plastic_beta(Vec2{zx[i], zy[i]}, Vec2{vtx, vty}, g / p.sigma0, p.s_ba);
        }
        rx[i] = vtx - zx[i] * coeff;
        ry[i] = vty - zy[i] * coeff;
    }
}

// Wrench at the CoP from packed state and rate:
// f = -sum (sigma0 z + sigma1 z' + sigma2 v_t) p_n f_N A, compensated sums.
inline Wrench wrench_packed(const Twist& v, const double* z, const double* rate,
                            const PackedContact& c, const FrictionParams& p) {
    const std::size_t m = c.size();
    const double* zx = z;
    const double* zy = z + m;
    const double* rx = rate;
    const double* ry = rate + m;
    KahanSum fx, fy, tau;
    for (std::size_t i = 0; i < m; ++i) {
        const double vtx = v.vx - v.omega * c.y[i];
        const double vty = v.vy + v.omega * c.x[i];
        const double w = c.w[i] * c.f_N;
        const double lx = (p.sigma0 * zx[i] + p.sigma1 * rx[i] + p.sigma2 * vtx) * w;
        const double ly = (p.sigma0 * zy[i] + p.sigma1 * ry[i] + p.sigma2 * vty) * w;
        fx.add(-lx);
        fy.add(-ly);
        tau.add(-(c.x[i] * ly - c.y[i] * lx));
    }
    return {fx.value(), fy.value(), tau.value()};
}

/// Field-level deflection rate (vanishing on inactive cells).
inline void bristle_rate(const Twist& v, const BristleField& field, const PressureGrid& grid,
                         const FrictionParams& p, BristleField& rate) {
    if (field.n != grid.n || rate.n != grid.n)
        throw std::invalid_argument("bristle_rate: field/grid size mismatch");
    const PackedContact c = PackedContact::from(grid);
    const std::size_t m = c.size();
    std::vector<double> z(2 * m), rr(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
        z[k] = field.zx[c.idx[k]];
        z[m + k] = field.zy[c.idx[k]];
    }
    rate_packed(v, z.data(), c, p, rr.data());
    std::fill(rate.zx.begin(), rate.zx.end(), 0.0);
    std::fill(rate.zy.begin(), rate.zy.end(), 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        rate.zx[c.idx[k]] = rr[k];
        rate.zy[c.idx[k]] = rr[m + k];
    }
}

/// Total wrench at the CoP from a field and its rate.
inline Wrench wrench(const Twist& v, const BristleField& field, const BristleField& rate,
                     const PressureGrid& grid, const FrictionParams& p) {
    if (field.n != grid.n || rate.n != grid.n)
        throw std::invalid_argument("wrench: field/grid size mismatch");
    KahanSum fx, fy, tau;
    for (int i : grid.active) {
        const Vec2 vt = cell_velocity(v, grid.cx[i], grid.cy[i]);
        const double w = grid.pn[i] * grid.f_N * grid.cell_area;
        const double lx = (p.sigma0 * field.zx[i] + p.sigma1 * rate.zx[i] + p.sigma2 * vt.x) * w;
        const double ly = (p.sigma0 * field.zy[i] + p.sigma1 * rate.zy[i] + p.sigma2 * vt.y) * w;
        fx.add(-lx);
        fy.add(-ly);
        tau.add(-(grid.cx[i] * ly - grid.cy[i] * lx));
    }
    return {fx.value(), fy.value(), tau.value()};
}

/// Steady-state wrench: per-cell z* = g v_t / (sigma0 |v_t|), rate term zero.
inline Wrench steady_state_wrench(const Twist& v, const PressureGrid& grid,
                                  const FrictionParams& p) {
    KahanSum fx, fy, tau;
    for (int i : grid.active) {
        const Vec2 vt = cell_velocity(v, grid.cx[i], grid.cy[i]);
        const double speed = std::sqrt(vt.x * vt.x + vt.y * vt.y);
        double lx = p.sigma2 * vt.x;
        double ly = p.sigma2 * vt.y;
        if (speed > 0.0) {
            const double gs = g_curve(speed, p) / speed; // sigma0 z* = g v_hat
            lx += gs * vt.x;
            ly += gs * vt.y;
        }
        const double w = grid.pn[i] * grid.f_N * grid.cell_area;
        lx *= w;
        ly *= w;
        fx.add(-lx);
        fy.add(-ly);
        tau.add(-(grid.cx[i] * ly - grid.cy[i] * lx));
    }
    return {fx.value(), fy.value(), tau.value()};
}

namespace detail {
// Twist of a rotation at rate omega about center c, expressed at the CoP.
inline Twist rotation_about(Vec2 c, double omega) {
    return {omega * c.y, -omega * c.x, omega};
}
} // namespace detail

inline constexpr double kOmegaEps = 1e-12; // below this the CoR is ill-defined

/// Steady-state evaluation with bilinear blending over the cell containing
/// the center of rotation. The four corner evaluations rotate at the
/// commanded omega about the cell's corners and are blended with the
/// normalized in-cell offsets; plain evaluation is used near pure translation
/// and whenever the CoR falls outside the grid.
inline Wrench steady_state_bilinear(const Twist& v, const PressureGrid& grid,
                                    const FrictionParams& p) {
    if (std::abs(v.omega) <= kOmegaEps) return steady_state_wrench(v, grid, p);
    const Vec2 cor{-v.vy / v.omega, v.vx / v.omega};
    if (!grid.contains(cor.x, cor.y)) return steady_state_wrench(v, grid, p);

    int ix = int(std::floor((cor.x - (grid.x0 - 0.5 * grid.hx)) / grid.hx));
    int iy = int(std::floor((cor.y - (grid.y0 - 0.5 * grid.hy)) / grid.hy));
    ix = std::min(std::max(ix, 0), grid.n - 1);
    iy = std::min(std::max(iy, 0), grid.n - 1);

    const double xlo = grid.x0 + ix * grid.hx - 0.5 * grid.hx;
    const double ylo = grid.y0 + iy * grid.hy - 0.5 * grid.hy;
    const double dx = (cor.x - xlo) / grid.hx;
    const double dy = (cor.y - ylo) / grid.hy;

    const Wrench f1 = steady_state_wrench(detail::rotation_about({xlo, ylo}, v.omega), grid, p);
    const Wrench f2 =
        steady_state_wrench(detail::rotation_about({xlo, ylo + grid.hy}, v.omega), grid, p);
    const Wrench f3 =
        steady_state_wrench(detail::rotation_about({xlo + grid.hx, ylo}, v.omega), grid, p);
    const Wrench f4 = steady_state_wrench(
        detail::rotation_about({xlo + grid.hx, ylo + grid.hy}, v.omega), grid, p);

    return (1.0 - dx) * (1.0 - dy) * f1 + (1.0 - dx) * dy * f2 + dx * (1.0 - dy) * f3 +
           dx * dy * f4;
}

/// Debug snapshot of the deflection field.
inline void write_field_csv(const BristleField& f, const PressureGrid& grid,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x,y,zx,zy\n";
    char buf[160];
    for (std::size_t i = 0; i < f.cells(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", grid.cx[i], grid.cy[i],
                      f.zx[i], f.zy[i]);
        out << buf;
    }
}

} // namespace pfm
