#include "roomnav/geodesic.hpp"

#include <queue>

namespace roomnav {

DistanceField::DistanceField(int width, int height, double resolution, int sx, int sy)
    : width_(width),
      height_(height),
      resolution_(resolution),
      sx_(sx),
      sy_(sy),
      straight_(static_cast<std::size_t>(width) * height, -1),
      diag_(static_cast<std::size_t>(width) * height, -1) {}

DistanceField shortest_path_field(int width, int height, double resolution,
                                  const std::vector<std::uint8_t>& traversable,
                                  int sx, int sy, bool corner_safe) {
    DistanceField field(width, height, resolution, sx, sy);
    auto& straight = field.straight_steps();
    auto& diag = field.diag_steps();

    struct Entry {
        double dist;
        std::int32_t idx;
        bool operator>(const Entry& o) const { return dist > o.dist; }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::vector<std::uint8_t> settled(traversable.size(), 0);

    const std::size_t src = field.index(sx, sy);
    if (!traversable[src]) return field;
    straight[src] = 0;
    diag[src] = 0;
    open.push({0.0, static_cast<std::int32_t>(src)});

    static constexpr int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    while (!open.empty()) {
        const Entry e = open.top();
        open.pop();
        if (settled[e.idx]) continue;
        settled[e.idx] = 1;

        const int cx = e.idx % width;
        const int cy = e.idx / width;
        const std::int32_t s0 = straight[e.idx];
        const std::int32_t d0 = diag[e.idx];

        for (int n = 0; n < 8; ++n) {
            const int nx = cx + dx[n];
            const int ny = cy + dy[n];
            if (nx < 0 || nx >= width || ny < 0 || ny >= height) continue;
            const std::size_t ni = field.index(nx, ny);
            if (!traversable[ni] || settled[ni]) continue;
            if (corner_safe && n >= 4 &&
                (!traversable[field.index(nx, cy)] || !traversable[field.index(cx, ny)])) {
                continue;
            }
            const std::int32_t ns = s0 + (n < 4 ? 1 : 0);
            const std::int32_t nd = d0 + (n < 4 ? 0 : 1);
            const double cand = octile_length(ns, nd, resolution);
            if (straight[ni] < 0 || cand < octile_length(straight[ni], diag[ni], resolution)) {
                straight[ni] = ns;
                diag[ni] = nd;
                open.push({cand, static_cast<std::int32_t>(ni)});
            }
        }
    }
    return field;
}

std::vector<std::uint8_t> traversable_mask(const SemanticGrid& grid) {
    std::vector<std::uint8_t> mask(grid.cell_count(), 0);
    for (int cy = 0; cy < grid.height(); ++cy) {
        for (int cx = 0; cx < grid.width(); ++cx) {
            mask[grid.index(cx, cy)] = grid.label(cx, cy).navigable() ? 1 : 0;
        }
    }
    return mask;
}

DistanceField geodesic_field(const SemanticGrid& grid, Point source) {
    const int sx = grid.cell_of_x(source.x);
    const int sy = grid.cell_of_y(source.y);
    if (!grid.navigable(sx, sy)) {
        throw DomainError("geodesic source is not on a navigable cell");
    }
    return shortest_path_field(grid.width(), grid.height(), grid.resolution(),
                               traversable_mask(grid), sx, sy);
}

std::optional<double> geodesic_distance(const SemanticGrid& grid, Point a, Point b) {
    const int bx = grid.cell_of_x(b.x);
    const int by = grid.cell_of_y(b.y);
    if (!grid.navigable(bx, by)) {
        throw DomainError("geodesic target is not on a navigable cell");
    }
    const DistanceField field = geodesic_field(grid, a);
    const double d = field.meters(bx, by);
    if (d == DistanceField::kUnreachable) return std::nullopt;
    return d;
}

}  // namespace roomnav
