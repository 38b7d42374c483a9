#include "roomnav/grid.hpp"

#include <cmath>
#include <sstream>

namespace roomnav {

const char* room_type_name(RoomType t) {
    switch (t) {
        case RoomType::Bathroom: return "Bathroom";
        case RoomType::Bedroom: return "Bedroom";
        case RoomType::DiningRoom: return "DiningRoom";
        case RoomType::Kitchen: return "Kitchen";
        case RoomType::LivingRoom: return "LivingRoom";
    }
    return "Unknown";
}

std::optional<RoomType> room_type_from_name(const std::string& name) {
    for (RoomType t : kAllRoomTypes) {
        if (name == room_type_name(t)) return t;
    }
    return std::nullopt;
}

SemanticGrid::SemanticGrid(int width, int height, double resolution,
                           std::vector<CellLabel> cells,
                           std::vector<RoomInstance> rooms)
    : width_(width),
      height_(height),
      resolution_(resolution),
      cells_(std::move(cells)),
      rooms_(std::move(rooms)) {
    validate();
}

bool SemanticGrid::has_room_of_type(RoomType t) const {
    for (const auto& r : rooms_) {
        if (r.type == t) return true;
    }
    return false;
}

int SemanticGrid::full_label(int cx, int cy) const {
    const CellLabel c = label(cx, cy);
    if (c.is_outside()) return kLabelOutside;
    if (c.is_wall()) return kLabelWall;
    if (c.is_interior()) return kLabelHall;
    return full_label_of(rooms_[c.room_instance()].type);
}

int SemanticGrid::cell_of_x(double x_m) const {
    return static_cast<int>(std::floor(x_m / resolution_));
}

int SemanticGrid::cell_of_y(double y_m) const {
    return static_cast<int>(std::floor(y_m / resolution_));
}

bool SemanticGrid::point_in_bounds(Point p) const {
    return in_bounds(cell_of_x(p.x), cell_of_y(p.y));
}

bool SemanticGrid::point_navigable(Point p) const {
    return navigable(cell_of_x(p.x), cell_of_y(p.y));
}

double SemanticGrid::inset_depth(int cx, int cy, const RoomInstance& room) const {
    const Point c = cell_center(cx, cy);
    const double bx0 = room.x0 * resolution_;
    const double bx1 = (room.x1 + 1) * resolution_;
    const double by0 = room.y0 * resolution_;
    const double by1 = (room.y1 + 1) * resolution_;
    return std::min(std::min(c.x - bx0, bx1 - c.x), std::min(c.y - by0, by1 - c.y));
}

bool SemanticGrid::cell_inside_room_type(int cx, int cy, RoomType t,
                                         double inset_m) const {
    for (const auto& r : rooms_) {
        if (r.type != t) continue;
        if (inset_depth(cx, cy, r) >= inset_m) return true;
    }
    return false;
}

bool SemanticGrid::rooms_adjacent(int room_a, int room_b) const {
    const RoomInstance& a = rooms_[room_a];
    const RoomInstance& b = rooms_[room_b];
    const bool x_overlap = a.x0 <= b.x1 && b.x0 <= a.x1;
    const bool y_overlap = a.y0 <= b.y1 && b.y0 <= a.y1;
    // one wall column between the rectangles
    if (y_overlap && (b.x0 - a.x1 == 2 || a.x0 - b.x1 == 2)) return true;
    if (x_overlap && (b.y0 - a.y1 == 2 || a.y0 - b.y1 == 2)) return true;
    return false;
}

namespace {

[[noreturn]] void fail_at(int cx, int cy, const std::string& what) {
    std::ostringstream os;
    os << "invalid grid at cell (" << cx << "," << cy << "): " << what;
    throw ValidationError(os.str());
}

}  // namespace

void SemanticGrid::validate() const {
    if (resolution_ <= 0.0) throw ValidationError("resolution must be > 0");
    if (width_ < 1 || height_ < 1) throw ValidationError("grid must be at least 1x1");
    if (cells_.size() != static_cast<std::size_t>(width_) * height_) {
        throw ValidationError("cell array size does not match width*height");
    }

    for (std::size_t i = 0; i < rooms_.size(); ++i) {
        const RoomInstance& r = rooms_[i];
        if (r.id != static_cast<int>(i)) {
            throw ValidationError("room ids must match their position in the room list");
        }
        if (r.x0 > r.x1 || r.y0 > r.y1 || r.x0 < 0 || r.y0 < 0 ||
            r.x1 >= width_ || r.y1 >= height_) {
            throw ValidationError("room " + std::to_string(i) + " bounds outside grid");
        }
        if (r.area() < 4) {
            throw ValidationError("room " + std::to_string(i) + " smaller than 4 cells");
        }
        for (std::size_t j = 0; j < i; ++j) {
            const RoomInstance& o = rooms_[j];
            if (r.x0 <= o.x1 && o.x0 <= r.x1 && r.y0 <= o.y1 && o.y0 <= r.y1) {
                throw ValidationError("rooms " + std::to_string(j) + " and " +
                                      std::to_string(i) + " overlap");
            }
        }
    }

    bool any_navigable = false;
    for (int cy = 0; cy < height_; ++cy) {
        for (int cx = 0; cx < width_; ++cx) {
            const CellLabel c = cells_[index(cx, cy)];
            if (c.is_room()) {
                const int id = c.room_instance();
                if (id < 0 || id >= static_cast<int>(rooms_.size())) {
                    fail_at(cx, cy, "room instance " + std::to_string(id) + " out of range");
                }
                if (!rooms_[id].contains(cx, cy)) {
                    fail_at(cx, cy, "cell labeled room " + std::to_string(id) +
                                        " lies outside its rectangle");
                }
            }
            any_navigable = any_navigable || c.navigable();
        }
    }
    if (!any_navigable) throw ValidationError("grid has no navigable cell");
}

}  // namespace roomnav
