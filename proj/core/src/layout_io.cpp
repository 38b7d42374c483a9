#include "roomnav/layout_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "roomnav/hash.hpp"

namespace roomnav {
namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string code_of(CellLabel c) {
    if (c.is_outside()) return "O";
    if (c.is_wall()) return "W";
    if (c.is_interior()) return "I";
    return "R" + std::to_string(c.room_instance());
}

}  // namespace

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
    return buf;
}

std::string save_layout(const SemanticGrid& grid) {
    std::ostringstream os;
    os << "roomnav-layout 1\n";
    os << "resolution " << format_double(grid.resolution()) << "\n";
    os << "width " << grid.width() << "\n";
    os << "height " << grid.height() << "\n";
    os << "rooms " << grid.rooms().size() << "\n";
    for (const RoomInstance& r : grid.rooms()) {
        os << "room " << r.id << " " << room_type_name(r.type) << " " << r.x0 << " "
           << r.y0 << " " << r.x1 << " " << r.y1 << "\n";
    }
    os << "cells\n";

    const auto& cells = grid.cells();
    int per_line = 0;
    std::size_t i = 0;
    while (i < cells.size()) {
        std::size_t j = i;
        while (j < cells.size() && cells[j] == cells[i]) ++j;
        os << (j - i) << code_of(cells[i]);
        i = j;
        if (++per_line == 16) {
            os << "\n";
            per_line = 0;
        } else if (i < cells.size()) {
            os << " ";
        }
    }
    if (per_line != 0) os << "\n";
    os << "end\n";
    return os.str();
}

SemanticGrid load_layout(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string word;

    auto expect_word = [&](const char* what) {
        if (!(is >> word)) throw ParseError(std::string("layout truncated, expected ") + what);
        return word;
    };
    auto expect_key = [&](const char* key) {
        if (expect_word(key) != key) {
            throw ParseError(std::string("layout: expected '") + key + "', got '" + word + "'");
        }
    };

    expect_key("roomnav-layout");
    int version = 0;
    if (!(is >> version)) throw ParseError("layout: missing version");
    if (version != 1) {
        throw ParseError("layout: unsupported version " + std::to_string(version));
    }

    expect_key("resolution");
    double resolution = 0.0;
    if (!(is >> resolution)) throw ParseError("layout: bad resolution");
    expect_key("width");
    int width = 0;
    if (!(is >> width)) throw ParseError("layout: bad width");
    expect_key("height");
    int height = 0;
    if (!(is >> height)) throw ParseError("layout: bad height");
    expect_key("rooms");
    int room_count = 0;
    if (!(is >> room_count) || room_count < 0) throw ParseError("layout: bad room count");

    std::vector<RoomInstance> rooms;
    rooms.reserve(room_count);
    for (int i = 0; i < room_count; ++i) {
        expect_key("room");
        RoomInstance r;
        std::string type_name;
        if (!(is >> r.id >> type_name >> r.x0 >> r.y0 >> r.x1 >> r.y1)) {
            throw ParseError("layout: malformed room record " + std::to_string(i));
        }
        const auto type = room_type_from_name(type_name);
        if (!type) throw ParseError("layout: unknown room type '" + type_name + "'");
        r.type = *type;
        rooms.push_back(r);
    }

    expect_key("cells");
    if (width < 1 || height < 1) throw ParseError("layout: non-positive grid size");
    const std::size_t total = static_cast<std::size_t>(width) * height;
    std::vector<CellLabel> cells;
    cells.reserve(total);
    while (cells.size() < total) {
        expect_word("cell run");
        std::size_t pos = 0;
        long run = 0;
        try {
            run = std::stol(word, &pos);
        } catch (const std::exception&) {
            throw ParseError("layout: bad run token '" + word + "'");
        }
        if (run <= 0 || pos >= word.size()) {
            throw ParseError("layout: bad run token '" + word + "'");
        }
        const char code = word[pos];
        CellLabel label;
        if (code == 'O' && pos + 1 == word.size()) {
            label = CellLabel::outside();
        } else if (code == 'I' && pos + 1 == word.size()) {
            label = CellLabel::interior();
        } else if (code == 'W' && pos + 1 == word.size()) {
            label = CellLabel::wall();
        } else if (code == 'R' && pos + 1 < word.size()) {
            int id = 0;
            try {
                id = std::stoi(word.substr(pos + 1));
            } catch (const std::exception&) {
                throw ParseError("layout: bad room code '" + word + "'");
            }
            label = CellLabel::room(id);
        } else {
            throw ParseError("layout: unknown cell code '" + word + "'");
        }
        if (cells.size() + run > total) {
            throw ParseError("layout: cell runs exceed width*height");
        }
        cells.insert(cells.end(), run, label);
    }
    expect_key("end");

    // SemanticGrid construction re-checks every structural invariant and
    // reports the first offending cell.
    return SemanticGrid(width, height, resolution, std::move(cells), std::move(rooms));
}

void save_layout_file(const SemanticGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    out << save_layout(grid);
    if (!out) throw IoError("write failed: " + path);
}

SemanticGrid load_layout_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_layout(buf.str());
}

std::string layout_hash(const SemanticGrid& grid) {
    return to_hex(fnv1a64(save_layout(grid)));
}

}  // namespace roomnav
