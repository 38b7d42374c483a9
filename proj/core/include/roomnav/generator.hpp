#pragma once

#include <cstdint>
#include <vector>

#include "roomnav/grid.hpp"

namespace roomnav {

// Probability that a room of type `b` is placed adjacent (sharing a wall)
// to a room of type `a` in a generated house.
struct AdjacencyRule {
    RoomType a = RoomType::Kitchen;
    RoomType b = RoomType::DiningRoom;
    double probability = 1.0;
};

struct GenParams {
    std::uint64_t rng_seed = 0;
    double extent_w_m = 15.0;  // maximum house footprint, meters
    double extent_h_m = 12.0;
    int room_count_min = 4;
    int room_count_max = 7;
    std::vector<AdjacencyRule> adjacency_rules;
    double door_width_m = 0.5;
    double resolution = SemanticGrid::kDefaultResolution;
};

// Ring of Outside cells around every generated footprint. The belief
// prior projection assumes this margin when mapping the canonical frame
// onto a world of a given extent.
inline constexpr int kOutsideMarginCells = 8;

std::vector<AdjacencyRule> default_adjacency_rules();

// Binary-space-partition house generator. Same params (including seed)
// produce a bit-identical grid on every platform. Room types are placed
// with deliberate regularity: the kitchen takes the leaf nearest the
// footprint's bottom-left corner, bedrooms the leaf farthest from it,
// and adjacency rules steer the rest. Throws GenerationError when the
// extent cannot hold room_count_min rooms.
SemanticGrid generate_house(const GenParams& params);

}  // namespace roomnav
