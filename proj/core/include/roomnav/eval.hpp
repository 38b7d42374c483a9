#pragma once

#include <string>
#include <vector>

#include "roomnav/nav.hpp"

namespace roomnav {

struct EpisodeScore {
    bool success = false;
    double spl = 0.0;
    double path_len = 0.0;      // realized translation, meters
    double geodesic_len = 0.0;  // l
    int steps = 0;
};

// RoomNav scoring: success iff the final action is Stop and the final
// pose's cell lies >= 0.2m inside a room of the target type;
// spl = success * l / max(l, p) with p the realized translation length
// (collisions contribute nothing). Throws ValidationError on house-hash
// mismatch or an incomplete log.
EpisodeScore score_episode(const TrajectoryLog& log, const Episode& episode,
                           const SemanticGrid& grid);

struct VariantAggregate {
    Variant variant = Variant::Ours;
    double mean_spl = 0.0;
    double success_rate = 0.0;
    int n = 0;
};

struct EvalReport {
    std::vector<Variant> variants;
    std::vector<VariantAggregate> rows;
    // logs[variant position][episode index]
    std::vector<std::vector<TrajectoryLog>> logs;

    std::string table_text() const;
    std::string table_csv() const;
    const VariantAggregate& row(Variant v) const;
};

// Runs every requested variant on every episode and aggregates mean SPL
// and success rate. Episodes fan out across a worker pool; aggregation
// order is fixed by episode index, so output is identical across runs.
EvalReport evaluate(const HouseLibrary& houses, const std::vector<Episode>& episodes,
                    const BeliefEngine& engine, const AgentConfig& config,
                    const std::vector<Variant>& variants, unsigned workers = 0);

struct PointErrorStats {
    double mean_error_m = 0.0;  // Euclidean distance final prediction -> GT point
    double miss_rate = 0.0;     // final prediction outside every target-type room
    int n = 0;                  // episodes with a prediction
};

PointErrorStats point_error(const std::vector<TrajectoryLog>& logs,
                            const HouseLibrary& houses);

}  // namespace roomnav
