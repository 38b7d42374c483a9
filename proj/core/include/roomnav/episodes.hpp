#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "roomnav/geodesic.hpp"
#include "roomnav/grid.hpp"
#include "roomnav/rng.hpp"
#include "roomnav/sim.hpp"

namespace roomnav {

inline constexpr double kMinGeodesicM = 4.0;
inline constexpr double kMaxGeodesicM = 45.0;
inline constexpr int kDefaultMaxSteps = 500;
inline constexpr int kDefaultSampleDraws = 10000;

struct Episode {
    std::string house_id;
    std::string house_hash;
    Pose start;
    RoomType target_type = RoomType::Kitchen;
    Point gt_point;
    double geodesic_len = 0.0;
    int max_steps = kDefaultMaxSteps;

    bool operator==(const Episode&) const = default;
};

struct GtPointResult {
    Point point;
    double geodesic_len = 0.0;
};

// Ground-truth target point: the navigable cell center lying at least
// kRoomInsetM inside some room of type `tr` with the smallest geodesic
// distance from `start`; ties resolved by lowest (row, col).
// Throws SamplingError when the start is already inside a room of the
// target type or no qualifying cell is reachable.
GtPointResult gt_target_point(const SemanticGrid& grid, Point start, RoomType tr);

// Rejection-samples (start pose, target type) pairs until the episode
// constraints hold. Deterministic for a given rng state.
Episode sample_episode(const SemanticGrid& grid, const std::string& house_id,
                       const std::string& house_hash, Rng& rng,
                       int max_draws = kDefaultSampleDraws);

// Dataset document: header plus one record per line,
//   house_id house_hash start_x start_y start_heading target_type gt_x gt_y l
std::string write_dataset(const std::vector<Episode>& episodes);
std::vector<Episode> read_dataset(std::string_view text);

// Layouts keyed by house id; resolves episode references and rejects
// hash mismatches.
class HouseLibrary {
public:
    void add(std::string id, SemanticGrid grid);
    const SemanticGrid& resolve(const Episode& episode) const;
    const SemanticGrid& at(const std::string& id) const;
    const std::string& hash_of(const std::string& id) const;
    const std::map<std::string, SemanticGrid>& houses() const { return grids_; }
    bool empty() const { return grids_.empty(); }

private:
    std::map<std::string, SemanticGrid> grids_;
    std::map<std::string, std::string> hashes_;
};

}  // namespace roomnav
