#pragma once

#include <optional>

#include "roomnav/belief.hpp"
#include "roomnav/episodes.hpp"
#include "roomnav/geodesic.hpp"
#include "roomnav/trajectory.hpp"

namespace roomnav {

inline constexpr double kTerminalReward = 2.5;
inline constexpr double kStepPenalty = 0.01;
inline constexpr double kBearingToleranceDeg = 5.0;

struct AgentConfig {
    int repredict_period = 6;   // k
    int freeze_step = 60;       // K
    int max_steps = 500;        // N
    double stop_radius_m = 0.2;
    SensorParams sensor;
};

struct PointPrediction {
    Point point;
    double distance_m = 0.0;     // straight-line, from the predicting pose
    double bearing_deg = 0.0;    // relative to heading, in (-180, 180]
    double confidence = 0.0;     // P_in_tr at the chosen cell
    bool frozen = false;
};

// Masks the stack to the target room type and picks the cell whose 3x3
// neighborhood-minimum of P_in_tr is largest (the believed analogue of a
// point 0.2m inside the room). Ties prefer the smallest believed-map
// geodesic distance from the pose, then lowest (row, col). nullopt when
// every score is zero.
std::optional<PointPrediction> select_point(const BeliefStack& stack, const Pose& pose,
                                            RoomType tr);

// Nearest unobserved cell adjacent to an observed navigable cell, by
// believed-map geodesic distance; nullopt when nothing is unobserved.
std::optional<Point> frontier_fallback(const BeliefStack& stack, const Pose& pose);

enum class RewardVariant { PointNav, RoomNav };

double compute_reward(double prev_dist_m, double cur_dist_m, bool terminal,
                      bool success, double spl, RewardVariant variant);

// Greedy geodesic point-navigation controller. Plans on observed free
// space plus optimistically-free unobserved cells; collisions reveal
// blocked cells and trigger a replan.
class NavController {
public:
    NavController(int width, int height, double resolution);

    void integrate(const Observation& obs);
    void mark_blocked(int cx, int cy);
    // adopt a stack's believed free space (GT-belief oracle variants)
    void seed_from(const BeliefStack& stack);

    // Scores every reachable heading by the believed-map distance of the
    // cell one forward step would land in, turns toward the best heading
    // (shorter arc), and moves forward once aligned. Stop when the goal
    // cell is reached or unreachable on the believed map.
    Action plan_step(const Pose& pose, Point goal);

    bool traversable(int cx, int cy) const {
        return traversable_[static_cast<std::size_t>(cy) * width_ + cx] != 0;
    }

private:
    int width_;
    int height_;
    double resolution_;
    std::vector<std::uint8_t> traversable_;
    DistanceField field_;
    bool field_valid_ = false;
    int goal_cx_ = -1;
    int goal_cy_ = -1;
};

// Full episode rollout. Deterministic for fixed inputs; the random
// baseline derives its stream from the episode content and variant name.
TrajectoryLog run_agent(const SemanticGrid& grid, const Episode& episode,
                        const BeliefEngine& engine, const AgentConfig& config,
                        Variant variant);

}  // namespace roomnav
