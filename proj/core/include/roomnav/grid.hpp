#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roomnav/errors.hpp"

namespace roomnav {

// A point in world coordinates, meters.
struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

enum class RoomType : std::uint8_t {
    Bathroom = 0,
    Bedroom = 1,
    DiningRoom = 2,
    Kitchen = 3,
    LivingRoom = 4,
};

inline constexpr int kRoomTypeCount = 5;
inline constexpr std::array<RoomType, kRoomTypeCount> kAllRoomTypes = {
    RoomType::Bathroom, RoomType::Bedroom, RoomType::DiningRoom,
    RoomType::Kitchen, RoomType::LivingRoom};

const char* room_type_name(RoomType t);
std::optional<RoomType> room_type_from_name(const std::string& name);

// Per-cell label. Wall is interior-but-not-navigable; it blocks movement
// and line of sight. Room cells carry the index of their RoomInstance.
class CellLabel {
public:
    constexpr CellLabel() : code_(kOutside) {}

    static constexpr CellLabel outside() { return CellLabel(kOutside); }
    static constexpr CellLabel wall() { return CellLabel(kWall); }
    static constexpr CellLabel interior() { return CellLabel(kInterior); }
    static constexpr CellLabel room(int instance) { return CellLabel(instance); }

    constexpr bool is_outside() const { return code_ == kOutside; }
    constexpr bool is_wall() const { return code_ == kWall; }
    constexpr bool is_interior() const { return code_ == kInterior; }
    constexpr bool is_room() const { return code_ >= 0; }
    constexpr int room_instance() const { return code_; }

    constexpr bool navigable() const { return code_ == kInterior || code_ >= 0; }
    constexpr bool blocks_sight() const { return code_ == kWall || code_ == kOutside; }

    constexpr bool operator==(const CellLabel&) const = default;

private:
    static constexpr std::int32_t kOutside = -3;
    static constexpr std::int32_t kWall = -2;
    static constexpr std::int32_t kInterior = -1;

    explicit constexpr CellLabel(std::int32_t code) : code_(code) {}
    std::int32_t code_;
};

// Axis-aligned room rectangle, inclusive cell bounds.
struct RoomInstance {
    int id = 0;
    RoomType type = RoomType::Bathroom;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
    int area() const { return width() * height(); }
    bool contains(int cx, int cy) const {
        return cx >= x0 && cx <= x1 && cy >= y0 && cy <= y1;
    }
    bool operator==(const RoomInstance&) const = default;
};

// Flat semantic label alphabet used by the prior statistics: the full
// distinction an observation can make about one cell.
enum FullLabel : int {
    kLabelOutside = 0,
    kLabelWall = 1,
    kLabelHall = 2,  // navigable interior outside every room
    kLabelRoomBase = 3,  // + room type index
};
inline constexpr int kFullLabelCount = kLabelRoomBase + kRoomTypeCount;

inline constexpr int full_label_of(RoomType t) {
    return kLabelRoomBase + static_cast<int>(t);
}

// The 3-way classification relative to one room type.
enum Class3 : int {
    kClassOutside = 0,
    kClassInHouseNotRoom = 1,
    kClassInRoom = 2,
};
inline constexpr int kClass3Count = 3;

// Projects a full label to the 3-class labeling for room type r.
inline int class3_of_label(int full_label, RoomType r) {
    if (full_label == kLabelOutside) return kClassOutside;
    if (full_label == full_label_of(r)) return kClassInRoom;
    return kClassInHouseNotRoom;
}

// Success / target-point inset: a pose counts as inside a room only when
// its cell center is at least this far from the room rectangle boundary.
inline constexpr double kRoomInsetM = 0.2;

// Discretized single-floor house. Immutable after construction; all
// queries are const and safe to run concurrently.
class SemanticGrid {
public:
    static constexpr double kDefaultResolution = 0.25;  // meters per cell

    SemanticGrid(int width, int height, double resolution,
                 std::vector<CellLabel> cells, std::vector<RoomInstance> rooms);

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    std::size_t cell_count() const { return cells_.size(); }

    bool in_bounds(int cx, int cy) const {
        return cx >= 0 && cx < width_ && cy >= 0 && cy < height_;
    }
    std::size_t index(int cx, int cy) const {
        return static_cast<std::size_t>(cy) * width_ + cx;
    }

    CellLabel label(int cx, int cy) const { return cells_[index(cx, cy)]; }
    // Out-of-bounds coordinates read as Outside.
    CellLabel label_clamped(int cx, int cy) const {
        return in_bounds(cx, cy) ? cells_[index(cx, cy)] : CellLabel::outside();
    }
    bool navigable(int cx, int cy) const {
        return in_bounds(cx, cy) && cells_[index(cx, cy)].navigable();
    }

    const std::vector<CellLabel>& cells() const { return cells_; }
    const std::vector<RoomInstance>& rooms() const { return rooms_; }
    const RoomInstance& room(int id) const { return rooms_[id]; }
    bool has_room_of_type(RoomType t) const;

    int full_label(int cx, int cy) const;
    int class3(int cx, int cy, RoomType r) const {
        return class3_of_label(full_label(cx, cy), r);
    }

    // point <-> cell conversions
    int cell_of_x(double x_m) const;
    int cell_of_y(double y_m) const;
    Point cell_center(int cx, int cy) const {
        return {(cx + 0.5) * resolution_, (cy + 0.5) * resolution_};
    }
    bool point_in_bounds(Point p) const;
    bool point_navigable(Point p) const;

    // Chebyshev distance (meters) from the cell center to the rectangle
    // boundary of `room`; negative when the center lies outside it.
    double inset_depth(int cx, int cy, const RoomInstance& room) const;
    // True when the cell center sits >= kRoomInsetM inside some room of type t.
    bool cell_inside_room_type(int cx, int cy, RoomType t, double inset_m) const;

    // Rooms separated by exactly one wall cell with overlapping extent.
    bool rooms_adjacent(int room_a, int room_b) const;

    bool operator==(const SemanticGrid&) const = default;

private:
    void validate() const;

    int width_;
    int height_;
    double resolution_;
    std::vector<CellLabel> cells_;
    std::vector<RoomInstance> rooms_;
};

}  // namespace roomnav
