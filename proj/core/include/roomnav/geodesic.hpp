#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "roomnav/grid.hpp"

namespace roomnav {

// Path lengths are tracked as integer step counts so that equal paths
// produce bit-identical doubles no matter how they were found.
inline double octile_length(std::int32_t straight_steps, std::int32_t diag_steps,
                            double resolution) {
    static const double kSqrt2 = 1.4142135623730951;
    return static_cast<double>(straight_steps) * resolution +
           static_cast<double>(diag_steps) * (resolution * kSqrt2);
}

// Single-source shortest-path distances over an 8-connected grid.
class DistanceField {
public:
    static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

    DistanceField() = default;
    DistanceField(int width, int height, double resolution, int sx, int sy);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    int source_x() const { return sx_; }
    int source_y() const { return sy_; }

    bool reachable(int cx, int cy) const { return straight_[index(cx, cy)] >= 0; }
    double meters(int cx, int cy) const {
        const std::size_t i = index(cx, cy);
        if (straight_[i] < 0) return kUnreachable;
        return octile_length(straight_[i], diag_[i], resolution_);
    }
    std::pair<std::int32_t, std::int32_t> steps(int cx, int cy) const {
        const std::size_t i = index(cx, cy);
        return {straight_[i], diag_[i]};
    }

    std::size_t index(int cx, int cy) const {
        return static_cast<std::size_t>(cy) * width_ + cx;
    }

    std::vector<std::int32_t>& straight_steps() { return straight_; }
    std::vector<std::int32_t>& diag_steps() { return diag_; }

private:
    int width_ = 0;
    int height_ = 0;
    double resolution_ = 0.0;
    int sx_ = 0;
    int sy_ = 0;
    // -1 marks unreachable
    std::vector<std::int32_t> straight_;
    std::vector<std::int32_t> diag_;
};

// Dijkstra over an arbitrary traversability bitmap (row-major, nonzero =
// traversable). The planner runs this on believed maps; the world module
// runs it on the true grid. With corner_safe, diagonal steps additionally
// require both orthogonal neighbors to be traversable, which restricts
// the field to routes a discrete forward motion can actually execute.
DistanceField shortest_path_field(int width, int height, double resolution,
                                  const std::vector<std::uint8_t>& traversable,
                                  int sx, int sy, bool corner_safe = false);

std::vector<std::uint8_t> traversable_mask(const SemanticGrid& grid);

// Field of geodesic distances from `source` over the true grid.
// Throws DomainError when the source point is not on a navigable cell.
DistanceField geodesic_field(const SemanticGrid& grid, Point source);

// Shortest 8-connected path length between two points, in meters.
// std::nullopt when no path exists. Throws DomainError when either
// endpoint is not on a navigable cell.
std::optional<double> geodesic_distance(const SemanticGrid& grid, Point a, Point b);

}  // namespace roomnav
