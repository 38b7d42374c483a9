#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "roomnav/grid.hpp"

namespace roomnav {

// Canonical frame for the aligned room-frequency fields.
inline constexpr int kCanonicalFrame = 64;
// Co-occurrence window half-width, meters (matches the egocentric crop).
inline constexpr double kOffsetWindowM = 13.0;

// Aligned per-type occupancy counts over the canonical frame. Houses are
// scaled to the frame and translated so the kitchen bounding-box corner
// sits at the frame's bottom-left cell.
struct AlignedCounts {
    std::array<std::vector<std::uint32_t>, kRoomTypeCount> room;  // frame cells
    std::vector<std::uint32_t> outside;
    int houses = 0;   // houses accumulated
    int skipped = 0;  // houses without a kitchen
};

AlignedCounts align_and_accumulate(const std::vector<SemanticGrid>& corpus);

// Ordered co-occurrence counts over the full label alphabet:
// counts[(dy,dx)][l*8+m] = number of cell pairs (c, c+delta) with
// label(c)=l and label(c+delta)=m, both inside the grid.
struct PairCounts {
    int radius_cells = 0;  // window half-width in cells
    int span = 0;          // 2*radius+1
    std::vector<std::uint32_t> counts;
    int houses = 0;
    double resolution = 0.0;

    std::size_t index(int l, int m, int dx, int dy) const {
        return (static_cast<std::size_t>(dy + radius_cells) * span + (dx + radius_cells)) *
                   (kFullLabelCount * kFullLabelCount) +
               static_cast<std::size_t>(l) * kFullLabelCount + m;
    }
    std::uint32_t at(int l, int m, int dx, int dy) const {
        return counts[index(l, m, dx, dy)];
    }
};

PairCounts train_cooccurrence(const std::vector<SemanticGrid>& corpus);

// Architectural regularity statistics learned from a layout corpus.
//
// Smoothing works on per-house average counts, so duplicating the corpus
// reproduces the model bit-for-bit:
//   P(class j at delta | label l) = (count_j + N*alpha) / (total + 3*N*alpha)
// with N the corpus size.
class PriorModel {
public:
    PriorModel();  // uninformative; every conditional and field is uniform
    static PriorModel train(const std::vector<SemanticGrid>& corpus, double alpha = 1.0);

    bool is_uniform() const { return counts_.houses == 0; }
    int corpus_size() const { return counts_.houses; }
    int skipped_houses() const { return fields_.skipped; }
    double alpha() const { return alpha_; }
    double resolution() const { return counts_.resolution; }
    int window_radius_cells() const { return counts_.radius_cells; }

    // aligned-field frequencies, in [0,1]
    double field_room(RoomType r, int u, int v) const;
    double field_outside(int u, int v) const;

    // smoothed conditional over the 3 classes of room type r at a cell
    // offset (dx, dy) from an observed cell of full label `origin_label`
    std::array<double, 3> conditional3(RoomType r, int origin_label, int dx,
                                       int dy) const;
    // global class marginals for room type r
    std::array<double, 3> marginal3(RoomType r) const;

    std::uint64_t pair_count(int l, int m, int dx, int dy) const;
    std::uint64_t label_total(int l) const;

    const AlignedCounts& aligned_counts() const { return fields_; }
    const PairCounts& pair_counts() const { return counts_; }

    std::string serialize() const;
    static PriorModel deserialize(std::string_view text);

private:
    double alpha_ = 1.0;
    AlignedCounts fields_;
    PairCounts counts_;
};

void save_prior_file(const PriorModel& model, const std::string& path);
PriorModel load_prior_file(const std::string& path);

}  // namespace roomnav
