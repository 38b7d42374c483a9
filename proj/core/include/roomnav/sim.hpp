#pragma once

#include <cstdint>
#include <vector>

#include "roomnav/grid.hpp"

namespace roomnav {

inline constexpr double kForwardStepM = 0.25;
inline constexpr double kTurnDeg = 10.0;

enum class Action : std::uint8_t { Forward = 0, TurnLeft = 1, TurnRight = 2, Stop = 3 };

const char* action_code(Action a);  // "F" "L" "R" "S"
Action action_from_code(char c);

// heading in degrees, 0 points +x, counterclockwise positive
double normalize_heading(double deg);

// Unit direction for a heading. Multiples of 10 degrees come from an
// exact table whose entries are mirrored across quadrants, so rotating
// a heading by 90/180/270 degrees rotates its direction bit-exactly.
struct Dir2 {
    double x;
    double y;
};
Dir2 heading_dir(double heading_deg);

struct Pose {
    double x = 0.0;  // meters
    double y = 0.0;
    double heading_deg = 0.0;  // in [0, 360)

    Point position() const { return {x, y}; }
    bool operator==(const Pose&) const = default;
};

struct StepResult {
    Pose pose;
    bool collided = false;
};

// Executes one discrete action. Forward moves kForwardStepM along the
// heading unless the destination cell is non-navigable, in which case
// the pose is unchanged and `collided` is set (no sliding).
StepResult step(const SemanticGrid& grid, const Pose& pose, Action action);

struct SensorParams {
    double fov_deg = 90.0;
    double range_m = 5.0;
    double ray_step_deg = 1.0;
};

struct VisibleCell {
    int cx = 0;
    int cy = 0;
    CellLabel label;
    int full_label = kLabelOutside;  // semantic class, see FullLabel
};

struct Observation {
    std::vector<VisibleCell> visible_cells;
    std::vector<double> ranges;  // per ray, meters to first blocker
    double gps_dx = 0.0;         // displacement from episode start, world frame
    double gps_dy = 0.0;
    double compass_deg = 0.0;    // heading relative to start, in [0, 360)
};

// A cell is visible iff its center lies within range and within the
// field of view, and the segment from the pose to the center crosses no
// sight-blocking cell (supercover traversal; the endpoint itself may be
// a wall). The agent's own cell is always visible.
Observation observe(const SemanticGrid& grid, const Pose& pose, const Pose& start,
                    const SensorParams& sensor);

// All cells touched by the segment a->b, in traversal order, including
// cells met only at a corner point. Exposed for the visibility tests.
std::vector<std::pair<int, int>> supercover_cells(const SemanticGrid& grid,
                                                  Point a, Point b);

}  // namespace roomnav
