#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "roomnav/belief.hpp"
#include "roomnav/grid.hpp"
#include "roomnav/trajectory.hpp"

namespace roomnav {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

// Fixed palette: Outside white, Interior gray, Wall black, one color per
// room type.
Rgb label_color(CellLabel label, const SemanticGrid& grid);
Rgb room_type_color(RoomType t);
Rgb class3_color(int class3);

class Image {
public:
    Image(int width, int height, Rgb fill = {255, 255, 255});
    int width() const { return width_; }
    int height() const { return height_; }
    void set(int x, int y, Rgb c);
    Rgb get(int x, int y) const;
    // binary PPM (P6)
    std::string ppm() const;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

void write_ppm_file(const Image& img, const std::string& path);

Image render_grid(const SemanticGrid& grid);
Image render_crop(const EgocentricCrop& crop);
// value grid -> white-to-color heatmap, normalized by the max value
Image render_heatmap(const std::vector<double>& values, int width, int height, Rgb hot);
// grid plus trajectory overlay (path, start, GT point, final prediction)
Image render_trajectory(const SemanticGrid& grid, const TrajectoryLog& log);

}  // namespace roomnav
