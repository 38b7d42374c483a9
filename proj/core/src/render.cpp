#include "roomnav/render.hpp"

#include <cmath>
#include <fstream>

namespace roomnav {

Rgb room_type_color(RoomType t) {
    switch (t) {
        case RoomType::Bathroom: return {90, 160, 255};
        case RoomType::Bedroom: return {255, 170, 60};
        case RoomType::DiningRoom: return {80, 200, 120};
        case RoomType::Kitchen: return {230, 80, 80};
        case RoomType::LivingRoom: return {180, 120, 220};
    }
    return {0, 0, 0};
}

Rgb label_color(CellLabel label, const SemanticGrid& grid) {
    if (label.is_outside()) return {255, 255, 255};
    if (label.is_wall()) return {0, 0, 0};
    if (label.is_interior()) return {200, 200, 200};
    return room_type_color(grid.rooms()[label.room_instance()].type);
}

Rgb class3_color(int class3) {
    switch (class3) {
        case kClassOutside: return {255, 255, 255};
        case kClassInHouseNotRoom: return {200, 200, 200};
        case kClassInRoom: return {230, 80, 80};
    }
    return {0, 0, 0};
}

Image::Image(int width, int height, Rgb fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * height * 3) {
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

void Image::set(int x, int y, Rgb c) {
    if (x < 0 || x >= width_ || y < 0 || y >= height_) return;
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    data_[i] = c.r;
    data_[i + 1] = c.g;
    data_[i + 2] = c.b;
}

Rgb Image::get(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {data_[i], data_[i + 1], data_[i + 2]};
}

std::string Image::ppm() const {
    std::string out = "P6\n" + std::to_string(width_) + " " + std::to_string(height_) +
                      "\n255\n";
    out.append(reinterpret_cast<const char*>(data_.data()), data_.size());
    return out;
}

void write_ppm_file(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    const std::string bytes = img.ppm();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path);
}

Image render_grid(const SemanticGrid& grid) {
    Image img(grid.width(), grid.height());
    for (int cy = 0; cy < grid.height(); ++cy) {
        for (int cx = 0; cx < grid.width(); ++cx) {
            img.set(cx, cy, label_color(grid.label(cx, cy), grid));
        }
    }
    return img;
}

Image render_crop(const EgocentricCrop& crop) {
    Image img(kCropCells, kCropCells);
    for (int v = 0; v < kCropCells; ++v) {
        for (int u = 0; u < kCropCells; ++u) {
            img.set(u, v, class3_color(crop.hard[crop.index(u, v)]));
        }
    }
    return img;
}

Image render_heatmap(const std::vector<double>& values, int width, int height, Rgb hot) {
    if (values.size() != static_cast<std::size_t>(width) * height) {
        throw DomainError("render_heatmap: value count does not match the image size");
    }
    double max_v = 0.0;
    for (double v : values) max_v = std::max(max_v, v);
    Image img(width, height);
    if (max_v <= 0.0) return img;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double a = values[static_cast<std::size_t>(y) * width + x] / max_v;
            const auto mix = [a](std::uint8_t c) {
                return static_cast<std::uint8_t>(std::lround(255.0 + a * (c - 255.0)));
            };
            img.set(x, y, {mix(hot.r), mix(hot.g), mix(hot.b)});
        }
    }
    return img;
}

Image render_trajectory(const SemanticGrid& grid, const TrajectoryLog& log) {
    Image img = render_grid(grid);
    for (const TrajectoryStep& s : log.steps) {
        img.set(grid.cell_of_x(s.pose.x), grid.cell_of_y(s.pose.y), {60, 60, 220});
    }
    img.set(grid.cell_of_x(log.episode.start.x), grid.cell_of_y(log.episode.start.y),
            {0, 160, 0});
    img.set(grid.cell_of_x(log.episode.gt_point.x), grid.cell_of_y(log.episode.gt_point.y),
            {200, 0, 0});
    if (!log.steps.empty() && log.steps.back().has_prediction()) {
        const Point p = log.steps.back().pred;
        img.set(grid.cell_of_x(p.x), grid.cell_of_y(p.y), {255, 140, 0});
    }
    return img;
}

}  // namespace roomnav
