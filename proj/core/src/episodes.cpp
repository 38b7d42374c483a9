#include "roomnav/episodes.hpp"

#include <cstdio>
#include <sstream>

#include "roomnav/layout_io.hpp"

namespace roomnav {
namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool start_in_target_room(const SemanticGrid& grid, Point start, RoomType tr) {
    const int cx = grid.cell_of_x(start.x);
    const int cy = grid.cell_of_y(start.y);
    for (const RoomInstance& r : grid.rooms()) {
        if (r.type == tr && r.contains(cx, cy)) return true;
    }
    return false;
}

}  // namespace

GtPointResult gt_target_point(const SemanticGrid& grid, Point start, RoomType tr) {
    if (!grid.point_navigable(start)) {
        throw DomainError("gt_target_point: start is not navigable");
    }
    if (start_in_target_room(grid, start, tr)) {
        throw SamplingError("episode start lies inside a room of the target type");
    }

    const DistanceField field = geodesic_field(grid, start);
    bool found = false;
    GtPointResult best;
    // (row, col) scan order plus strict < realizes the lexicographic tie-break
    for (int cy = 0; cy < grid.height(); ++cy) {
        for (int cx = 0; cx < grid.width(); ++cx) {
            if (!grid.navigable(cx, cy)) continue;
            if (!grid.cell_inside_room_type(cx, cy, tr, kRoomInsetM)) continue;
            const double d = field.meters(cx, cy);
            if (d == DistanceField::kUnreachable) continue;
            if (!found || d < best.geodesic_len) {
                found = true;
                best.geodesic_len = d;
                best.point = grid.cell_center(cx, cy);
            }
        }
    }
    if (!found) {
        throw SamplingError("no reachable target point for room type " +
                            std::string(room_type_name(tr)));
    }
    return best;
}

Episode sample_episode(const SemanticGrid& grid, const std::string& house_id,
                       const std::string& house_hash, Rng& rng, int max_draws) {
    if (grid.rooms().empty()) {
        throw SamplingError("house has no rooms to navigate to");
    }
    std::vector<RoomType> present;
    for (RoomType t : kAllRoomTypes) {
        if (grid.has_room_of_type(t)) present.push_back(t);
    }

    std::vector<std::pair<int, int>> navigable;
    for (int cy = 0; cy < grid.height(); ++cy) {
        for (int cx = 0; cx < grid.width(); ++cx) {
            if (grid.navigable(cx, cy)) navigable.emplace_back(cx, cy);
        }
    }

    for (int draw = 0; draw < max_draws; ++draw) {
        const auto [cx, cy] = navigable[rng.uniform_index(navigable.size())];
        const double heading = 10.0 * static_cast<double>(rng.uniform_index(36));
        const RoomType tr = present[rng.uniform_index(present.size())];

        const Point start_pt = grid.cell_center(cx, cy);
        if (start_in_target_room(grid, start_pt, tr)) continue;

        GtPointResult gt;
        try {
            gt = gt_target_point(grid, start_pt, tr);
        } catch (const SamplingError&) {
            continue;
        }
        if (gt.geodesic_len < kMinGeodesicM || gt.geodesic_len > kMaxGeodesicM) continue;

        Episode ep;
        ep.house_id = house_id;
        ep.house_hash = house_hash;
        ep.start = {start_pt.x, start_pt.y, heading};
        ep.target_type = tr;
        ep.gt_point = gt.point;
        ep.geodesic_len = gt.geodesic_len;
        return ep;
    }
    throw SamplingError("sample_episode: no valid episode after " +
                        std::to_string(max_draws) + " draws");
}

std::string write_dataset(const std::vector<Episode>& episodes) {
    std::ostringstream os;
    os << "roomnav-episodes 1\n";
    os << "count " << episodes.size() << "\n";
    for (const Episode& e : episodes) {
        os << e.house_id << " " << e.house_hash << " " << fmt(e.start.x) << " "
           << fmt(e.start.y) << " " << fmt(e.start.heading_deg) << " "
           << room_type_name(e.target_type) << " " << fmt(e.gt_point.x) << " "
           << fmt(e.gt_point.y) << " " << fmt(e.geodesic_len) << "\n";
    }
    return os.str();
}

std::vector<Episode> read_dataset(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string word;
    if (!(is >> word) || word != "roomnav-episodes") {
        throw ParseError("dataset: bad magic");
    }
    int version = 0;
    if (!(is >> version) || version != 1) throw ParseError("dataset: unsupported version");
    if (!(is >> word) || word != "count") throw ParseError("dataset: missing count");
    std::size_t count = 0;
    if (!(is >> count)) throw ParseError("dataset: bad count");

    std::vector<Episode> episodes;
    episodes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Episode e;
        std::string type_name;
        if (!(is >> e.house_id >> e.house_hash >> e.start.x >> e.start.y >>
              e.start.heading_deg >> type_name >> e.gt_point.x >> e.gt_point.y >>
              e.geodesic_len)) {
            throw ParseError("dataset: malformed record " + std::to_string(i));
        }
        const auto type = room_type_from_name(type_name);
        if (!type) throw ParseError("dataset: unknown room type '" + type_name + "'");
        e.target_type = *type;
        if (e.geodesic_len < kMinGeodesicM || e.geodesic_len > kMaxGeodesicM) {
            throw ValidationError("dataset: record " + std::to_string(i) +
                                  " geodesic length " + fmt(e.geodesic_len) +
                                  " outside [" + fmt(kMinGeodesicM) + ", " +
                                  fmt(kMaxGeodesicM) + "]");
        }
        if (e.start.heading_deg < 0.0 || e.start.heading_deg >= 360.0) {
            throw ValidationError("dataset: record " + std::to_string(i) +
                                  " heading outside [0, 360)");
        }
        episodes.push_back(std::move(e));
    }
    return episodes;
}

void HouseLibrary::add(std::string id, SemanticGrid grid) {
    hashes_[id] = layout_hash(grid);
    grids_.emplace(std::move(id), std::move(grid));
}

const SemanticGrid& HouseLibrary::resolve(const Episode& episode) const {
    const auto it = grids_.find(episode.house_id);
    if (it == grids_.end()) {
        throw ValidationError("unknown house id '" + episode.house_id + "'");
    }
    const std::string& h = hashes_.at(episode.house_id);
    if (h != episode.house_hash) {
        throw ValidationError("house hash mismatch for '" + episode.house_id +
                              "': episode has " + episode.house_hash +
                              ", layout is " + h);
    }
    return it->second;
}

const SemanticGrid& HouseLibrary::at(const std::string& id) const {
    const auto it = grids_.find(id);
    if (it == grids_.end()) throw ValidationError("unknown house id '" + id + "'");
    return it->second;
}

const std::string& HouseLibrary::hash_of(const std::string& id) const {
    const auto it = hashes_.find(id);
    if (it == hashes_.end()) throw ValidationError("unknown house id '" + id + "'");
    return it->second;
}

}  // namespace roomnav
