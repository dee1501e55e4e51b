#pragma once

#include "pfm/distributed.hpp"
#include "pfm/math.hpp"
#include "pfm/pressure_grid.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pfm {

/// Pre-computed normalized limit surface h(r, v) sampled over spherical
/// coordinates. theta in [0, 2pi) spans 4*n_ls cells, phi in [0, pi/2] spans
/// n_ls cells; row phi=0 is pure rotation, row phi=pi/2 pure translation.
/// Each cell stores its 4 corner wrenches (duplicated across neighbours) so a
/// query touches exactly one record: i_c = n_ls * i_theta + i_phi.
struct LimitSurfaceTable {
    int n_ls = 0;
    double r_prime = 0.0;                    // equivalent radius at pre-compute time
    std::array<double, 3> max_f{0.0, 0.0, 0.0}; // per-component |f| maxima
    // 4 corners x (hx, hy, htau) per cell.
    std::vector<std::array<double, 12>> corners;

    bool valid() const { return n_ls >= 2 && !corners.empty(); }
    int cell_count() const { return 4 * n_ls * n_ls; }
};

/// Samples the steady-state limit surface of a grid with Coulomb parameters
/// (preset p0) on the corner lattice and normalizes per component. Tangential
/// sample speeds are scaled by the surface's own radius so the sampled force
/// distribution stays even. Corner values shared between cells are computed
/// once, so neighbouring cells agree bitwise.
inline LimitSurfaceTable precompute(const PressureGrid& grid, int n_ls, int threads = 1) {
    if (n_ls < 2) throw std::invalid_argument("precompute: need n_ls >= 2");
    if (grid.active.empty() || !(grid.r > 0.0))
        throw std::runtime_error("precompute: degenerate contact grid");

    FrictionParams coulomb = FrictionParams::p0();
    const double rp = grid.r;
    const int nt = 4 * n_ls;     // theta corners (wraps)
    const int np = n_ls + 1;     // phi corners, inclusive

    std::vector<Wrench> corner(std::size_t(nt) * np);
    auto sample_rows = [&](int t_begin, int t_end) {
        for (int it = t_begin; it < t_end; ++it) {
            const double theta = it * (0.5 * kPi) / n_ls;
            for (int ip = 0; ip < np; ++ip) {
                const double phi = ip * (0.5 * kPi) / n_ls;
                const Twist v{rp * std::cos(theta) * std::sin(phi),
                              rp * std::sin(theta) * std::sin(phi), std::cos(phi)};
                corner[std::size_t(it) * np + ip] = steady_state_bilinear(v, grid, coulomb);
            }
        }
    };
    if (threads <= 1) {
        sample_rows(0, nt);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (nt + threads - 1) / threads;
        for (int k = 0; k < threads; ++k) {
            const int b = k * chunk;
            const int e = std::min(nt, b + chunk);
            if (b < e) pool.emplace_back(sample_rows, b, e);
        }
        for (auto& t : pool) t.join();
    }

    LimitSurfaceTable table;
    table.n_ls = n_ls;
    table.r_prime = rp;
    for (const Wrench& f : corner) {
        table.max_f[0] = std::max(table.max_f[0], std::abs(f.fx));
        table.max_f[1] = std::max(table.max_f[1], std::abs(f.fy));
        table.max_f[2] = std::max(table.max_f[2], std::abs(f.tau));
    }
    auto normalized = [&](const Wrench& f) {
        return std::array<double, 3>{table.max_f[0] > 0.0 ? f.fx / table.max_f[0] : 0.0,
                                     table.max_f[1] > 0.0 ? f.fy / table.max_f[1] : 0.0,
                                     table.max_f[2] > 0.0 ? f.tau / table.max_f[2] : 0.0};
    };

    table.corners.resize(std::size_t(table.cell_count()));
    for (int it = 0; it < nt; ++it) {
        const int it1 = (it + 1) % nt;
        for (int ip = 0; ip < n_ls; ++ip) {
            const auto c1 = normalized(corner[std::size_t(it) * np + ip]);
            const auto c2 = normalized(corner[std::size_t(it1) * np + ip]);
            const auto c3 = normalized(corner[std::size_t(it) * np + ip + 1]);
            const auto c4 = normalized(corner[std::size_t(it1) * np + ip + 1]);
            auto& rec = table.corners[std::size_t(n_ls) * it + ip];
            for (int k = 0; k < 3; ++k) {
                rec[k] = c1[k];
                rec[3 + k] = c2[k];
                rec[6 + k] = c3[k];
                rec[9 + k] = c4[k];
            }
        }
    }
    return table;
}

/// Cell address and in-cell residuals of a (theta, phi) query. The phi = pi/2
/// boundary (pure translation) is clamped into the last phi cell so the blend
/// lands on its upper corners.
struct LookupCell {
    int i_theta = 0;
    int i_phi = 0;
    int i_c = 0;
    double d_theta = 0.0;
    double d_phi = 0.0;
};

inline LookupCell lookup_cell(int n_ls, double theta, double phi) {
    LookupCell out;
    const double tt = 2.0 * theta * n_ls / kPi;
    out.i_theta = int(std::floor(tt));
    out.d_theta = tt - out.i_theta;
    if (out.i_theta >= 4 * n_ls) { // theta numerically at 2pi
        out.i_theta = 0;
        out.d_theta = 0.0;
    }
    const double tp = 2.0 * phi * n_ls / kPi;
    out.i_phi = int(std::floor(tp));
    if (out.i_phi > n_ls - 1) out.i_phi = n_ls - 1;
    out.d_phi = tp - out.i_phi;
    out.i_c = n_ls * out.i_theta + out.i_phi;
    return out;
}

/// Normalized wrench for a twist. theta comes from the tangential direction
/// (shifted by pi for omega < 0), phi from the sliding/spinning ratio where
/// the query radius r undoes the stretched velocity sphere, so a re-sized
/// surface can reuse the table. A zero twist returns the zero vector.
inline std::array<double, 3> lookup(const LimitSurfaceTable& table, double r, const Twist& v) {
    if (!table.valid()) throw std::invalid_argument("lookup: invalid table");
    if (!(r > 0.0)) throw std::invalid_argument("lookup: need r > 0");
    const double vt = std::sqrt(v.vx * v.vx + v.vy * v.vy);
    const double wmag = r * std::abs(v.omega);
    if (vt == 0.0 && wmag == 0.0) return {0.0, 0.0, 0.0};

    double theta = std::atan2(v.vy, v.vx);
    if (v.omega < 0.0) theta += kPi;
    if (theta < 0.0) theta += 2.0 * kPi;
    if (theta >= 2.0 * kPi) theta -= 2.0 * kPi;
    const double phi = std::atan2(vt, wmag);

    const LookupCell cell = lookup_cell(table.n_ls, theta, phi);
    const double dt = cell.d_theta;
    const double dp = cell.d_phi;
    const auto& c = table.corners[std::size_t(cell.i_c)];
    const double sgn = v.omega >= 0.0 ? 1.0 : -1.0;
    const double w1 = (1.0 - dt) * (1.0 - dp);
    const double w2 = dt * (1.0 - dp);
    const double w3 = (1.0 - dt) * dp;
    const double w4 = dt * dp;
    return {sgn * (w1 * c[0] + w2 * c[3] + w3 * c[6] + w4 * c[9]),
            sgn * (w1 * c[1] + w2 * c[4] + w3 * c[7] + w4 * c[10]),
            sgn * (w1 * c[2] + w2 * c[5] + w3 * c[8] + w4 * c[11])};
}

// ---- cache file: magic "PFLS", u32 version, u32 n_ls, f64 r_prime,
// ---- 3 x f64 max_f, then corner records in i_c order, all little-endian.

inline constexpr std::uint32_t kCacheVersion = 1;

inline void save_table(const LimitSurfaceTable& table, const std::string& path) {
    static_assert(std::endian::native == std::endian::little,
                  "cache writer assumes a little-endian host");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open cache for writing: " + path);
    out.write("PFLS", 4);
    const std::uint32_t ver = kCacheVersion;
    const std::uint32_t n = std::uint32_t(table.n_ls);
    out.write(reinterpret_cast<const char*>(&ver), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&table.r_prime), 8);
    out.write(reinterpret_cast<const char*>(table.max_f.data()), 24);
    for (const auto& rec : table.corners)
        out.write(reinterpret_cast<const char*>(rec.data()), 12 * 8);
    if (!out) throw std::runtime_error("failed writing cache: " + path);
}

inline LimitSurfaceTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open cache: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "PFLS", 4) != 0)
        throw std::runtime_error("not a limit-surface cache: " + path);
    std::uint32_t ver = 0, n = 0;
    in.read(reinterpret_cast<char*>(&ver), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    if (ver != kCacheVersion) throw std::runtime_error("unsupported cache version");
    LimitSurfaceTable table;
    table.n_ls = int(n);
    in.read(reinterpret_cast<char*>(&table.r_prime), 8);
    in.read(reinterpret_cast<char*>(table.max_f.data()), 24);
    table.corners.resize(std::size_t(table.cell_count()));
    for (auto& rec : table.corners) in.read(reinterpret_cast<char*>(rec.data()), 12 * 8);
    if (!in) throw std::runtime_error("truncated cache: " + path);
    return table;
}

/// Inspection dump: one row per stored corner value.
inline void export_table_csv(const LimitSurfaceTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "i_theta,i_phi,corner,hx,hy,htau\n";
    char buf[160];
    for (int it = 0; it < 4 * table.n_ls; ++it) {
        for (int ip = 0; ip < table.n_ls; ++ip) {
            const auto& rec = table.corners[std::size_t(table.n_ls) * it + ip];
            for (int corner = 0; corner < 4; ++corner) {
                std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g\n", it, ip, corner + 1,
                              rec[3 * corner], rec[3 * corner + 1], rec[3 * corner + 2]);
                out << buf;
            }
        }
    }
}

} // namespace pfm
