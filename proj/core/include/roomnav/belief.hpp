#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "roomnav/grid.hpp"
#include "roomnav/priors.hpp"
#include "roomnav/sim.hpp"

namespace roomnav {

// Distance decay for co-occurrence evidence: w(delta) = 1/(1 + |delta|/lambda).
inline constexpr double kEvidenceLambdaM = 4.0;

// Total evidence mass a cell may absorb. Observations are correlated, so
// an unbounded sum of per-pair log-odds saturates and loses to the prior
// on cross-entropy; once the summed decay weights exceed this cap the
// whole sum is rescaled to it. Sparse evidence (mass below the cap) is
// untouched. 1.5 minimized held-out cross-entropy in a cap sweep.
inline constexpr double kEvidenceMassCap = 1.5;

// Egocentric crop geometry.
inline constexpr int kCropCells = 104;
inline constexpr double kCropExtentM = 26.0;
inline constexpr double kCropResolution = kCropExtentM / kCropCells;

class BeliefStack;

// Fusion machinery compiled from a PriorModel: per-(label, offset)
// log-odds evidence terms in 64-bit fixed point, plus the canonical-frame
// prior fields. Integer evidence sums make belief states exactly
// independent of observation order. Read-only and shared across runners.
class BeliefEngine {
public:
    explicit BeliefEngine(const PriorModel& model,
                          double evidence_mass_cap = kEvidenceMassCap);

    BeliefStack make_stack(int width, int height, double resolution) const;

    bool trained() const { return trained_; }
    int window_radius_cells() const { return radius_; }

private:
    friend class BeliefStack;

    static constexpr double kScale = 4294967296.0;  // 2^32

    bool trained_ = false;
    int radius_ = 0;
    int span_ = 1;
    double resolution_ = 0.0;
    double mass_cap_ = kEvidenceMassCap;

    // interleaved per (label, offset): [stageA, stageB x 5 types, w, pad]
    static constexpr int kLanes = 8;
    std::vector<std::int64_t> evidence_;  // label * span^2 * kLanes
    std::size_t evidence_index(int label, int dx, int dy) const {
        return ((static_cast<std::size_t>(label) * span_ + (dy + radius_)) * span_ +
                (dx + radius_)) * kLanes;
    }

    // aligned-field projection inputs, canonical frame, row-major
    std::vector<double> field_room_;  // type * frame^2
    std::vector<double> field_outside_;
};

// Per-room-type 3-class belief grids over one world. Observed cells are
// one-hot at their true class forever; unobserved cells combine the
// projected prior with accumulated co-occurrence evidence. P(outside) is
// shared by all room types.
class BeliefStack {
public:
    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    std::int64_t step_count() const { return step_count_; }
    std::size_t observed_count() const { return observed_total_; }

    bool observed(int cx, int cy) const { return observed_[index(cx, cy)] != 0; }
    int observed_label(int cx, int cy) const { return labels_[index(cx, cy)]; }

    // (P_outside, P_in_house_not_r, P_in_r); sums to 1 within 1e-9
    std::array<double, 3> distribution(RoomType r, int cx, int cy) const;
    double p_in_room(RoomType r, int cx, int cy) const {
        return distribution(r, cx, cy)[kClassInRoom];
    }
    int argmax_class(RoomType r, int cx, int cy) const;

    // Marks every visible cell observed at its true label and folds its
    // evidence into all unobserved cells within the co-occurrence window.
    // Repeating an observation is a no-op. Throws DomainError when an
    // observation lies outside the world bounds.
    void update(const Observation& obs);

    // False only for cells observed to be non-navigable. The planner
    // treats unobserved space optimistically.
    bool believed_traversable(int cx, int cy) const {
        const std::uint8_t l = labels_[index(cx, cy)];
        return observed_[index(cx, cy)] == 0 || (l != kLabelOutside && l != kLabelWall);
    }

    std::size_t index(int cx, int cy) const {
        return static_cast<std::size_t>(cy) * width_ + cx;
    }

    // Fully observed stack over the true grid (the GT-maps oracle).
    static BeliefStack ground_truth(const BeliefEngine& engine, const SemanticGrid& grid);

private:
    friend class BeliefEngine;

    const BeliefEngine* engine_ = nullptr;
    int width_ = 0;
    int height_ = 0;
    double resolution_ = 0.0;
    std::int64_t step_count_ = 0;
    std::size_t observed_total_ = 0;

    std::vector<std::uint8_t> observed_;
    std::vector<std::uint8_t> labels_;       // full labels of observed cells
    std::vector<double> prior_out_logit_;    // per cell
    std::vector<double> prior_in_logit_;     // per cell * 5 types
    std::vector<std::int64_t> evidence_;     // per cell * kLanes, fixed point
};

BeliefStack init_beliefs(const BeliefEngine& engine, int width, int height,
                         double resolution);
inline void update_beliefs(BeliefStack& stack, const Observation& obs) {
    stack.update(obs);
}

// 26m egocentric window of one room type's 3-class map, rotated so the
// agent's heading points "up" (increasing rows). Cells sampling outside
// the world read as Outside.
struct EgocentricCrop {
    RoomType room_type = RoomType::Kitchen;
    std::vector<std::array<double, 3>> dist;  // kCropCells^2, row-major
    std::vector<std::uint8_t> hard;           // argmax class per cell

    std::size_t index(int u, int v) const {
        return static_cast<std::size_t>(v) * kCropCells + u;
    }
};

EgocentricCrop extract_crop(const BeliefStack& stack, const Pose& pose, RoomType r);
EgocentricCrop extract_crop(const SemanticGrid& grid, const Pose& pose, RoomType r);

// Three-way classification metrics (Class-1 outside / Class-2 in-house /
// Class-3 in-room): per-class IoU and recall-style pixel accuracy.
// Classes absent from both prediction and truth are skipped in the means.
struct MapMetrics {
    std::array<double, 3> iou{};
    std::array<double, 3> class_accuracy{};
    double miou = 0.0;
    double avg_accuracy = 0.0;
};

MapMetrics map_metrics(const std::vector<std::uint8_t>& pred,
                       const std::vector<std::uint8_t>& gt);

std::vector<std::uint8_t> argmax_labels(const BeliefStack& stack, RoomType r);
std::vector<std::uint8_t> gt_labels(const SemanticGrid& grid, RoomType r);

// Aligned text table of three-way classification results, one row per
// mapper: mIoU plus per-class and average pixel accuracy (percent).
std::string format_metrics_table(
    const std::vector<std::pair<std::string, MapMetrics>>& rows);

// Mean over cells of -ln P(true class), nats. With `unobserved_only` the
// mean is restricted to cells the stack has not observed (the amodal
// part of the map); 0 when no such cell exists.
double cross_entropy(const BeliefStack& stack, const SemanticGrid& grid, RoomType r,
                     bool unobserved_only = false);
// Averaged over all five room types.
double mean_cross_entropy(const BeliefStack& stack, const SemanticGrid& grid,
                          bool unobserved_only = false);

}  // namespace roomnav
