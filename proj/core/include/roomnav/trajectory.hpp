#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "roomnav/episodes.hpp"
#include "roomnav/sim.hpp"

namespace roomnav {

enum class Variant { Ours = 0, NoMaps, GtMaps, GtPoint, Random };
inline constexpr int kVariantCount = 5;
const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct TrajectoryStep {
    int t = 0;
    Pose pose;  // pose after the action executed at step t
    Action action = Action::Stop;
    bool collided = false;
    Point pred{std::numeric_limits<double>::quiet_NaN(),
               std::numeric_limits<double>::quiet_NaN()};
    bool frozen = false;
    double reward = 0.0;

    bool has_prediction() const { return !std::isnan(pred.x); }
};

// Replayable record of one episode run. The footer duplicates the score
// so logs are self-describing; score_episode recomputes it from the rows.
struct TrajectoryLog {
    std::string house_id;
    std::string house_hash;
    std::string variant;
    Episode episode;
    std::vector<TrajectoryStep> steps;

    bool success = false;
    double spl = 0.0;
    double path_len = 0.0;
    double geodesic_len = 0.0;

    // instrumentation, filled by live runs, not serialized
    std::vector<int> predict_steps;
};

std::string write_trajectory(const TrajectoryLog& log);
TrajectoryLog read_trajectory(std::string_view text);

void save_trajectory_file(const TrajectoryLog& log, const std::string& path);
TrajectoryLog load_trajectory_file(const std::string& path);

}  // namespace roomnav
