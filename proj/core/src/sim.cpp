#include "roomnav/sim.hpp"

#include <cmath>
#include <limits>

namespace roomnav {
namespace {

// cos(k*10 deg) for k = 0..9; 0.5 and the endpoints are exact
constexpr double kQuadrantCos[10] = {
    1.0,
    0.984807753012208,
    0.9396926207859084,
    0.8660254037844387,
    0.766044443118978,
    0.6427876096865393,
    0.5,
    0.3420201433256687,
    0.17364817766693041,
    0.0,
};

Dir2 table_dir(int k) {  // k in [0, 36)
    if (k <= 9) return {kQuadrantCos[k], kQuadrantCos[9 - k]};
    if (k <= 18) return {-kQuadrantCos[18 - k], kQuadrantCos[k - 9]};
    if (k <= 27) return {-kQuadrantCos[k - 18], -kQuadrantCos[27 - k]};
    return {kQuadrantCos[36 - k], -kQuadrantCos[k - 27]};
}

constexpr double kDegToRad = 0.017453292519943295;

}  // namespace

const char* action_code(Action a) {
    switch (a) {
        case Action::Forward: return "F";
        case Action::TurnLeft: return "L";
        case Action::TurnRight: return "R";
        case Action::Stop: return "S";
    }
    return "?";
}

Action action_from_code(char c) {
    switch (c) {
        case 'F': return Action::Forward;
        case 'L': return Action::TurnLeft;
        case 'R': return Action::TurnRight;
        case 'S': return Action::Stop;
    }
    throw ParseError(std::string("unknown action code '") + c + "'");
}

double normalize_heading(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    return r;
}

Dir2 heading_dir(double heading_deg) {
    const double h = normalize_heading(heading_deg);
    const double k = h / 10.0;
    const double ki = std::floor(k);
    if (k == ki) {
        return table_dir(static_cast<int>(ki) % 36);
    }
    const double rad = h * kDegToRad;
    return {std::cos(rad), std::sin(rad)};
}

StepResult step(const SemanticGrid& grid, const Pose& pose, Action action) {
    switch (action) {
        case Action::Forward: {
            const Dir2 d = heading_dir(pose.heading_deg);
            const double nx = pose.x + kForwardStepM * d.x;
            const double ny = pose.y + kForwardStepM * d.y;
            if (grid.navigable(grid.cell_of_x(nx), grid.cell_of_y(ny))) {
                return {{nx, ny, pose.heading_deg}, false};
            }
            return {pose, true};
        }
        case Action::TurnLeft:
            return {{pose.x, pose.y, normalize_heading(pose.heading_deg + kTurnDeg)}, false};
        case Action::TurnRight:
            return {{pose.x, pose.y, normalize_heading(pose.heading_deg - kTurnDeg)}, false};
        case Action::Stop:
            return {pose, false};
    }
    return {pose, false};
}

std::vector<std::pair<int, int>> supercover_cells(const SemanticGrid& grid,
                                                  Point a, Point b) {
    const double res = grid.resolution();
    // work in cell units
    const double ax = a.x / res, ay = a.y / res;
    const double bx = b.x / res, by = b.y / res;
    const double dx = bx - ax, dy = by - ay;
    const double adx = std::abs(dx), ady = std::abs(dy);
    const int sx = dx > 0.0 ? 1 : -1;
    const int sy = dy > 0.0 ? 1 : -1;

    int cx = static_cast<int>(std::floor(ax));
    int cy = static_cast<int>(std::floor(ay));
    const int tx = static_cast<int>(std::floor(bx));
    const int ty = static_cast<int>(std::floor(by));

    std::vector<std::pair<int, int>> out;
    out.emplace_back(cx, cy);

    // Boundary-crossing comparisons are done on cross-multiplied
    // numerators, which keeps exact corner hits exact and makes the
    // traversal symmetric under axis swaps and reflections.
    int guard = 2 * (std::abs(tx - cx) + std::abs(ty - cy)) + 8;
    while ((cx != tx || cy != ty) && guard-- > 0) {
        if (cx == tx) {
            cy += sy;
        } else if (cy == ty) {
            cx += sx;
        } else {
            const double nx = sx > 0 ? (cx + 1) - ax : ax - cx;
            const double ny = sy > 0 ? (cy + 1) - ay : ay - cy;
            const double px = nx * ady;
            const double py = ny * adx;
            if (px < py) {
                cx += sx;
            } else if (py < px) {
                cy += sy;
            } else {
                // exact corner: the two side cells are touched as well
                out.emplace_back(cx + sx, cy);
                out.emplace_back(cx, cy + sy);
                cx += sx;
                cy += sy;
            }
        }
        out.emplace_back(cx, cy);
    }
    return out;
}

namespace {

bool segment_blocked(const SemanticGrid& grid, Point from, Point to) {
    const auto cells = supercover_cells(grid, from, to);
    const int tcx = grid.cell_of_x(to.x);
    const int tcy = grid.cell_of_y(to.y);
    for (const auto& [cx, cy] : cells) {
        if (cx == tcx && cy == tcy) continue;  // endpoint may be the blocker itself
        if (grid.label_clamped(cx, cy).blocks_sight()) return true;
    }
    return false;
}

double ray_range(const SemanticGrid& grid, const Pose& pose, double bearing_deg,
                 double max_range) {
    const Dir2 u = heading_dir(bearing_deg);
    const double res = grid.resolution();
    int cx = grid.cell_of_x(pose.x);
    int cy = grid.cell_of_y(pose.y);

    const double inf = std::numeric_limits<double>::infinity();
    const int sx = u.x > 0.0 ? 1 : -1;
    const int sy = u.y > 0.0 ? 1 : -1;
    const double inv_x = u.x != 0.0 ? 1.0 / u.x : inf;
    const double inv_y = u.y != 0.0 ? 1.0 / u.y : inf;

    double t_max_x = u.x != 0.0
        ? ((sx > 0 ? (cx + 1) * res : cx * res) - pose.x) * inv_x : inf;
    double t_max_y = u.y != 0.0
        ? ((sy > 0 ? (cy + 1) * res : cy * res) - pose.y) * inv_y : inf;
    const double t_dx = u.x != 0.0 ? res * std::abs(inv_x) : inf;
    const double t_dy = u.y != 0.0 ? res * std::abs(inv_y) : inf;

    double t = 0.0;
    while (t <= max_range) {
        if (t_max_x <= t_max_y) {
            t = t_max_x;
            t_max_x += t_dx;
            cx += sx;
        } else {
            t = t_max_y;
            t_max_y += t_dy;
            cy += sy;
        }
        if (t > max_range) break;
        if (grid.label_clamped(cx, cy).blocks_sight()) return t;
    }
    return max_range;
}

}  // namespace

Observation observe(const SemanticGrid& grid, const Pose& pose, const Pose& start,
                    const SensorParams& sensor) {
    Observation obs;
    obs.gps_dx = pose.x - start.x;
    obs.gps_dy = pose.y - start.y;
    obs.compass_deg = normalize_heading(pose.heading_deg - start.heading_deg);

    const Dir2 dir = heading_dir(pose.heading_deg);
    const double cos_half = std::cos(0.5 * sensor.fov_deg * kDegToRad);
    const double res = grid.resolution();
    const int reach = static_cast<int>(std::ceil(sensor.range_m / res)) + 1;

    const int acx = grid.cell_of_x(pose.x);
    const int acy = grid.cell_of_y(pose.y);

    const int x0 = std::max(0, acx - reach);
    const int x1 = std::min(grid.width() - 1, acx + reach);
    const int y0 = std::max(0, acy - reach);
    const int y1 = std::min(grid.height() - 1, acy + reach);

    for (int cy = y0; cy <= y1; ++cy) {
        for (int cx = x0; cx <= x1; ++cx) {
            if (cx == acx && cy == acy) {
                obs.visible_cells.push_back({cx, cy, grid.label(cx, cy), grid.full_label(cx, cy)});
                continue;
            }
            const Point c = grid.cell_center(cx, cy);
            const double vx = c.x - pose.x;
            const double vy = c.y - pose.y;
            const double dist = std::hypot(vx, vy);
            if (dist > sensor.range_m) continue;
            // |bearing - heading| <= fov/2, tested without atan2 so that
            // rotating pose and world together rotates the result exactly
            if (dir.x * vx + dir.y * vy < cos_half * dist) continue;
            if (segment_blocked(grid, pose.position(), c)) continue;
            obs.visible_cells.push_back({cx, cy, grid.label(cx, cy), grid.full_label(cx, cy)});
        }
    }

    const int n_rays = std::max(1, static_cast<int>(std::lround(sensor.fov_deg / sensor.ray_step_deg)));
    obs.ranges.reserve(n_rays);
    for (int i = 0; i < n_rays; ++i) {
        const double bearing =
            pose.heading_deg - 0.5 * sensor.fov_deg + (i + 0.5) * sensor.ray_step_deg;
        obs.ranges.push_back(ray_range(grid, pose, bearing, sensor.range_m));
    }
    return obs;
}

}  // namespace roomnav
