#pragma once

// Shared fixtures and independent oracles for the unit tests. Everything
// here is deliberately written from the definitions, not by calling the
// library paths under test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "roomnav/generator.hpp"
#include "roomnav/grid.hpp"
#include "roomnav/rng.hpp"

namespace roomnav::testing {

// Grid assembled cell-by-cell; defaults to all-Interior.
class GridBuilder {
public:
    GridBuilder(int width, int height, double resolution = 0.25)
        : width_(width), height_(height), resolution_(resolution),
          cells_(static_cast<std::size_t>(width) * height, CellLabel::interior()) {}

    GridBuilder& fill_outside() {
        std::fill(cells_.begin(), cells_.end(), CellLabel::outside());
        return *this;
    }
    GridBuilder& set(int cx, int cy, CellLabel l) {
        cells_[static_cast<std::size_t>(cy) * width_ + cx] = l;
        return *this;
    }
    GridBuilder& rect(int x0, int y0, int x1, int y1, CellLabel l) {
        for (int cy = y0; cy <= y1; ++cy) {
            for (int cx = x0; cx <= x1; ++cx) set(cx, cy, l);
        }
        return *this;
    }
    GridBuilder& wall_row(int cy) { return rect(0, cy, width_ - 1, cy, CellLabel::wall()); }
    GridBuilder& room(RoomType type, int x0, int y0, int x1, int y1) {
        RoomInstance r;
        r.id = static_cast<int>(rooms_.size());
        r.type = type;
        r.x0 = x0;
        r.y0 = y0;
        r.x1 = x1;
        r.y1 = y1;
        rooms_.push_back(r);
        rect(x0, y0, x1, y1, CellLabel::room(r.id));
        return *this;
    }

    SemanticGrid build() const { return {width_, height_, resolution_, cells_, rooms_}; }

private:
    int width_;
    int height_;
    double resolution_;
    std::vector<CellLabel> cells_;
    std::vector<RoomInstance> rooms_;
};

inline SemanticGrid open_grid(int width, int height, double resolution = 0.25) {
    return GridBuilder(width, height, resolution).build();
}

// --- exhaustive shortest-path oracle -----------------------------------
//
// Bellman-Ford over (straight, diagonal) step counts; relaxes until no
// change. Independent of the Dijkstra engine.
struct OracleField {
    std::vector<std::int32_t> straight;
    std::vector<std::int32_t> diag;
};

inline double oracle_len(std::int32_t s, std::int32_t d, double res) {
    static const double kSqrt2 = 1.4142135623730951;
    return static_cast<double>(s) * res + static_cast<double>(d) * (res * kSqrt2);
}

inline OracleField oracle_shortest_paths(const SemanticGrid& g, int sx, int sy) {
    const int w = g.width();
    const int h = g.height();
    OracleField f;
    f.straight.assign(static_cast<std::size_t>(w) * h, -1);
    f.diag.assign(f.straight.size(), -1);
    if (!g.navigable(sx, sy)) return f;
    f.straight[static_cast<std::size_t>(sy) * w + sx] = 0;
    f.diag[static_cast<std::size_t>(sy) * w + sx] = 0;

    const double res = g.resolution();
    bool changed = true;
    while (changed) {
        changed = false;
        for (int cy = 0; cy < h; ++cy) {
            for (int cx = 0; cx < w; ++cx) {
                const std::size_t i = static_cast<std::size_t>(cy) * w + cx;
                if (f.straight[i] < 0) continue;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (!g.navigable(nx, ny)) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                        const bool diag_step = dx != 0 && dy != 0;
                        const std::int32_t ns = f.straight[i] + (diag_step ? 0 : 1);
                        const std::int32_t nd = f.diag[i] + (diag_step ? 1 : 0);
                        if (f.straight[ni] < 0 ||
                            oracle_len(ns, nd, res) <
                                oracle_len(f.straight[ni], f.diag[ni], res)) {
                            f.straight[ni] = ns;
                            f.diag[ni] = nd;
                            changed = true;
                        }
                    }
                }
            }
        }
    }
    return f;
}

// --- brute-force visibility oracle --------------------------------------
//
// A cell blocks the segment when the segment intersects its closed unit
// square (slab clipping). Matches the supercover's corner semantics.
inline bool segment_touches_cell(double ax, double ay, double bx, double by,
                                 int cx, int cy, double res) {
    // work in cell units
    ax /= res; ay /= res; bx /= res; by /= res;
    const double dx = bx - ax;
    const double dy = by - ay;
    double t0 = 0.0, t1 = 1.0;
    const double lo[2] = {static_cast<double>(cx), static_cast<double>(cy)};
    const double hi[2] = {static_cast<double>(cx + 1), static_cast<double>(cy + 1)};
    const double o[2] = {ax, ay};
    const double d[2] = {dx, dy};
    for (int k = 0; k < 2; ++k) {
        if (d[k] == 0.0) {
            if (o[k] < lo[k] || o[k] > hi[k]) return false;
        } else {
            double ta = (lo[k] - o[k]) / d[k];
            double tb = (hi[k] - o[k]) / d[k];
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return false;
        }
    }
    return true;
}

inline bool oracle_visible(const SemanticGrid& g, double px, double py, int cx, int cy,
                           double range_m, double fov_deg, double heading_deg) {
    const Point c = g.cell_center(cx, cy);
    const double vx = c.x - px;
    const double vy = c.y - py;
    const double dist = std::hypot(vx, vy);
    if (g.cell_of_x(px) == cx && g.cell_of_y(py) == cy) return true;
    if (dist > range_m) return false;
    const double rad = 0.017453292519943295 * heading_deg;
    const double cos_half = std::cos(0.5 * fov_deg * 0.017453292519943295);
    if (std::cos(rad) * vx + std::sin(rad) * vy < cos_half * dist) return false;
    for (int oy = 0; oy < g.height(); ++oy) {
        for (int ox = 0; ox < g.width(); ++ox) {
            if (ox == cx && oy == cy) continue;
            if (!g.label(ox, oy).blocks_sight()) continue;
            if (segment_touches_cell(px, py, c.x, c.y, ox, oy, g.resolution())) {
                return false;
            }
        }
    }
    return true;
}

// --- planted-structure corpus -------------------------------------------
//
// Houses with a 4x16-cell kitchen anchored at a fixed position and,
// optionally, a dining room exactly 1m (4 cells) east of it, so every
// kitchen cell has a dining cell at offset (+4, 0). A bedroom moves
// between a few slots for variety. Used to verify prior recovery and
// evidence fusion against known conditionals.
inline SemanticGrid planted_house(bool dining_east, Rng& rng) {
    GridBuilder b(44, 36);
    b.fill_outside();
    b.rect(2, 2, 41, 33, CellLabel::interior());  // footprint
    b.room(RoomType::Kitchen, 4, 8, 7, 23);
    if (dining_east) b.room(RoomType::DiningRoom, 8, 8, 11, 23);
    const int slot = static_cast<int>(rng.uniform_index(3));
    b.room(RoomType::Bedroom, 22 + 6 * slot, 26, 27 + 6 * slot, 31);
    b.rect(16, 2, 16, 12, CellLabel::wall());
    return b.build();
}

inline std::vector<SemanticGrid> planted_corpus(int n, double p_dining, Rng& rng) {
    std::vector<SemanticGrid> corpus;
    corpus.reserve(n);
    for (int i = 0; i < n; ++i) {
        corpus.push_back(planted_house(rng.uniform01() < p_dining, rng));
    }
    return corpus;
}

// Random small grid with scattered walls; used by several oracle sweeps.
inline SemanticGrid random_obstacle_grid(int width, int height, double wall_prob,
                                         Rng& rng) {
    GridBuilder b(width, height);
    for (int cy = 0; cy < height; ++cy) {
        for (int cx = 0; cx < width; ++cx) {
            if (rng.uniform01() < wall_prob) b.set(cx, cy, CellLabel::wall());
        }
    }
    b.set(0, 0, CellLabel::interior());  // keep at least one navigable cell
    return b.build();
}

}  // namespace roomnav::testing
