#pragma once

#include <string>
#include <string_view>

#include "roomnav/grid.hpp"

namespace roomnav {

// Layout document, structured text:
//
//   roomnav-layout 1
//   resolution 0.25
//   width 76
//   height 60
//   rooms 5
//   room 0 Kitchen 9 9 20 18
//   ...
//   cells
//   684O 2I 3W 1R0 ...      (row-major run-length encoded labels)
//   end
//
// Codes: O outside, I interior, W wall, R<id> room cell.
// load(save(g)) reproduces g bit-exactly.
std::string save_layout(const SemanticGrid& grid);
SemanticGrid load_layout(std::string_view text);

void save_layout_file(const SemanticGrid& grid, const std::string& path);
SemanticGrid load_layout_file(const std::string& path);

// Content hash of the serialized layout (hex), used to pin episodes and
// trajectory logs to the exact house they were produced on.
std::string layout_hash(const SemanticGrid& grid);

}  // namespace roomnav
