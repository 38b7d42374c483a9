#include "roomnav/belief.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "roomnav/generator.hpp"

namespace roomnav {
namespace {

constexpr double kPriorFloor = 0.01;
constexpr double kInvScale = 1.0 / 4294967296.0;

double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double clamp_prob(double p) {
    return std::min(1.0 - kPriorFloor, std::max(kPriorFloor, p));
}

}  // namespace

BeliefEngine::BeliefEngine(const PriorModel& model, double evidence_mass_cap) {
    mass_cap_ = evidence_mass_cap;
    trained_ = !model.is_uniform();

    const std::size_t frame_cells = kCanonicalFrame * kCanonicalFrame;
    field_outside_.resize(frame_cells);
    field_room_.resize(kRoomTypeCount * frame_cells);
    for (int v = 0; v < kCanonicalFrame; ++v) {
        for (int u = 0; u < kCanonicalFrame; ++u) {
            const std::size_t i = static_cast<std::size_t>(v) * kCanonicalFrame + u;
            field_outside_[i] = model.field_outside(u, v);
            for (int r = 0; r < kRoomTypeCount; ++r) {
                field_room_[r * frame_cells + i] =
                    model.field_room(static_cast<RoomType>(r), u, v);
            }
        }
    }

    if (!trained_) {
        radius_ = 0;
        span_ = 1;
        evidence_.assign(kFullLabelCount * kLanes, 0);
        return;
    }

    radius_ = model.window_radius_cells();
    span_ = 2 * radius_ + 1;
    resolution_ = model.resolution();

    const double n_alpha = model.corpus_size() * model.alpha();
    std::array<double, kFullLabelCount> total{};
    double total_out = 0.0, total_inh = 0.0;
    for (int l = 0; l < kFullLabelCount; ++l) {
        total[l] = static_cast<double>(model.label_total(l));
        (l == kLabelOutside ? total_out : total_inh) += total[l];
    }
    const double marg_a = std::log(total_out + n_alpha) - std::log(total_inh + n_alpha);
    std::array<double, kRoomTypeCount> marg_b;
    for (int r = 0; r < kRoomTypeCount; ++r) {
        const double in_r = total[full_label_of(static_cast<RoomType>(r))];
        marg_b[r] = std::log(in_r + n_alpha) - std::log(total_inh - in_r + n_alpha);
    }

    evidence_.assign(static_cast<std::size_t>(kFullLabelCount) * span_ * span_ * kLanes, 0);
    for (int l = 0; l < kFullLabelCount; ++l) {
        for (int dy = -radius_; dy <= radius_; ++dy) {
            for (int dx = -radius_; dx <= radius_; ++dx) {
                const double dist = resolution_ * std::hypot(dx, dy);
                const double w = 1.0 / (1.0 + dist / kEvidenceLambdaM);

                double c_out = 0.0, c_all = 0.0;
                std::array<double, kRoomTypeCount> c_in{};
                for (int m = 0; m < kFullLabelCount; ++m) {
                    const double c = static_cast<double>(model.pair_count(l, m, dx, dy));
                    c_all += c;
                    if (m == kLabelOutside) {
                        c_out += c;
                    } else if (m >= kLabelRoomBase) {
                        c_in[m - kLabelRoomBase] += c;
                    }
                }
                const double c_inh = c_all - c_out;

                const std::size_t base = evidence_index(l, dx, dy);
                // offsets never seen in the corpus carry no information
                if (c_all == 0.0) {
                    evidence_[base + 6] = std::llround(w * kScale);
                    continue;
                }
                const double term_a =
                    w * (std::log(c_out + n_alpha) - std::log(c_inh + n_alpha) - marg_a);
                evidence_[base] = std::llround(term_a * kScale);
                for (int r = 0; r < kRoomTypeCount; ++r) {
                    const double term_b =
                        w * (std::log(c_in[r] + n_alpha) -
                             std::log(c_inh - c_in[r] + n_alpha) - marg_b[r]);
                    evidence_[base + 1 + r] = std::llround(term_b * kScale);
                }
                evidence_[base + 6] = std::llround(w * kScale);
            }
        }
    }
}

BeliefStack BeliefEngine::make_stack(int width, int height, double resolution) const {
    if (width < 1 || height < 1 || resolution <= 0.0) {
        throw DomainError("belief stack needs a positive extent and resolution");
    }
    if (trained_ && resolution != resolution_) {
        throw DomainError("belief stack resolution differs from the prior's");
    }

    BeliefStack s;
    s.engine_ = this;
    s.width_ = width;
    s.height_ = height;
    s.resolution_ = resolution;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    s.observed_.assign(n, 0);
    s.labels_.assign(n, kLabelOutside);
    s.evidence_.assign(n * BeliefEngine::kLanes, 0);
    s.prior_out_logit_.resize(n);
    s.prior_in_logit_.resize(n * kRoomTypeCount);

    // project the canonical fields assuming the generator's standard
    // outside margin and a kitchen anchored at the footprint corner
    const int m = kOutsideMarginCells;
    const int fw = std::max(1, width - 2 * m);
    const int fh = std::max(1, height - 2 * m);
    const int ax = m + 1;
    const int ay = m + 1;
    const std::size_t frame_cells = kCanonicalFrame * kCanonicalFrame;

    for (int cy = 0; cy < height; ++cy) {
        for (int cx = 0; cx < width; ++cx) {
            const std::size_t i = s.index(cx, cy);
            if (!trained_) {
                s.prior_out_logit_[i] = logit(1.0 / 3.0);
                for (int r = 0; r < kRoomTypeCount; ++r) {
                    s.prior_in_logit_[i * kRoomTypeCount + r] = 0.0;
                }
                continue;
            }
            int u = static_cast<int>(std::floor((cx - ax + 0.5) * kCanonicalFrame /
                                                static_cast<double>(fw)));
            int v = static_cast<int>(std::floor((cy - ay + 0.5) * kCanonicalFrame /
                                                static_cast<double>(fh)));
            u = std::min(kCanonicalFrame - 1, std::max(0, u));
            v = std::min(kCanonicalFrame - 1, std::max(0, v));
            const std::size_t f = static_cast<std::size_t>(v) * kCanonicalFrame + u;

            const double f_out = field_outside_[f];
            s.prior_out_logit_[i] = logit(clamp_prob(f_out));
            const double inh = std::max(1e-9, 1.0 - f_out);
            for (int r = 0; r < kRoomTypeCount; ++r) {
                const double q = clamp_prob(field_room_[r * frame_cells + f] / inh);
                s.prior_in_logit_[i * kRoomTypeCount + r] = logit(q);
            }
        }
    }
    return s;
}

BeliefStack init_beliefs(const BeliefEngine& engine, int width, int height,
                         double resolution) {
    return engine.make_stack(width, height, resolution);
}

void BeliefStack::update(const Observation& obs) {
    ++step_count_;
    const BeliefEngine& eng = *engine_;
    const int radius = eng.radius_;

    for (const VisibleCell& vc : obs.visible_cells) {
        if (vc.cx < 0 || vc.cx >= width_ || vc.cy < 0 || vc.cy >= height_) {
            throw DomainError("observation cell outside world bounds");
        }
        const std::size_t i = index(vc.cx, vc.cy);
        if (observed_[i]) continue;
        observed_[i] = 1;
        labels_[i] = static_cast<std::uint8_t>(vc.full_label);
        ++observed_total_;
        if (!eng.trained_) continue;

        // fold this cell's evidence into every cell of the window
        const int tx0 = std::max(0, vc.cx - radius);
        const int tx1 = std::min(width_ - 1, vc.cx + radius);
        const int ty0 = std::max(0, vc.cy - radius);
        const int ty1 = std::min(height_ - 1, vc.cy + radius);
        const int lanes = (tx1 - tx0 + 1) * BeliefEngine::kLanes;
        for (int ty = ty0; ty <= ty1; ++ty) {
            std::int64_t* ev = evidence_.data() + index(tx0, ty) * BeliefEngine::kLanes;
            const std::int64_t* tab =
                eng.evidence_.data() + eng.evidence_index(vc.full_label, tx0 - vc.cx, ty - vc.cy);
            for (int k = 0; k < lanes; ++k) ev[k] += tab[k];
        }
    }
}

std::array<double, 3> BeliefStack::distribution(RoomType r, int cx, int cy) const {
    const std::size_t i = index(cx, cy);
    if (observed_[i]) {
        std::array<double, 3> d = {0.0, 0.0, 0.0};
        d[class3_of_label(labels_[i], r)] = 1.0;
        return d;
    }
    constexpr int kL = BeliefEngine::kLanes;
    const double mass = static_cast<double>(evidence_[i * kL + 6]) * kInvScale;
    const double cap = engine_->mass_cap_;
    const double scale = mass > cap ? cap / mass : 1.0;
    const double a = prior_out_logit_[i] +
                     scale * static_cast<double>(evidence_[i * kL]) * kInvScale;
    const double b = prior_in_logit_[i * kRoomTypeCount + static_cast<int>(r)] +
                     scale * static_cast<double>(evidence_[i * kL + 1 + static_cast<int>(r)]) *
                         kInvScale;
    const double p_out = sigmoid(a);
    const double q = sigmoid(b);
    return {p_out, (1.0 - p_out) * (1.0 - q), (1.0 - p_out) * q};
}

int BeliefStack::argmax_class(RoomType r, int cx, int cy) const {
    const std::array<double, 3> d = distribution(r, cx, cy);
    int best = 0;
    for (int k = 1; k < 3; ++k) {
        if (d[k] > d[best]) best = k;
    }
    return best;
}

BeliefStack BeliefStack::ground_truth(const BeliefEngine& engine,
                                      const SemanticGrid& grid) {
    BeliefStack s = engine.make_stack(grid.width(), grid.height(), grid.resolution());
    for (int cy = 0; cy < grid.height(); ++cy) {
        for (int cx = 0; cx < grid.width(); ++cx) {
            const std::size_t i = s.index(cx, cy);
            s.observed_[i] = 1;
            s.labels_[i] = static_cast<std::uint8_t>(grid.full_label(cx, cy));
        }
    }
    s.observed_total_ = grid.cell_count();
    return s;
}

namespace {

EgocentricCrop crop_impl(const Pose& pose, RoomType r, double world_resolution,
                         int world_w, int world_h,
                         const std::function<std::array<double, 3>(int, int)>& sample) {
    EgocentricCrop crop;
    crop.room_type = r;
    crop.dist.resize(static_cast<std::size_t>(kCropCells) * kCropCells);
    crop.hard.resize(crop.dist.size());

    const Dir2 fwd = heading_dir(pose.heading_deg);
    const double rx = fwd.y;   // agent's right-hand direction
    const double ry = -fwd.x;

    for (int v = 0; v < kCropCells; ++v) {
        const double ly = (v - 51.5) * kCropResolution;
        for (int u = 0; u < kCropCells; ++u) {
            const double lx = (u - 51.5) * kCropResolution;
            const double px = pose.x + lx * rx + ly * fwd.x;
            const double py = pose.y + lx * ry + ly * fwd.y;
            const int cx = static_cast<int>(std::floor(px / world_resolution));
            const int cy = static_cast<int>(std::floor(py / world_resolution));

            std::array<double, 3> d = {1.0, 0.0, 0.0};  // outside when off-world
            if (cx >= 0 && cx < world_w && cy >= 0 && cy < world_h) d = sample(cx, cy);

            const std::size_t i = crop.index(u, v);
            crop.dist[i] = d;
            int best = 0;
            for (int k = 1; k < 3; ++k) {
                if (d[k] > d[best]) best = k;
            }
            crop.hard[i] = static_cast<std::uint8_t>(best);
        }
    }
    return crop;
}

}  // namespace

EgocentricCrop extract_crop(const BeliefStack& stack, const Pose& pose, RoomType r) {
    return crop_impl(pose, r, stack.resolution(), stack.width(), stack.height(),
                     [&](int cx, int cy) { return stack.distribution(r, cx, cy); });
}

EgocentricCrop extract_crop(const SemanticGrid& grid, const Pose& pose, RoomType r) {
    return crop_impl(pose, r, grid.resolution(), grid.width(), grid.height(),
                     [&](int cx, int cy) {
                         std::array<double, 3> d = {0.0, 0.0, 0.0};
                         d[grid.class3(cx, cy, r)] = 1.0;
                         return d;
                     });
}

MapMetrics map_metrics(const std::vector<std::uint8_t>& pred,
                       const std::vector<std::uint8_t>& gt) {
    if (pred.size() != gt.size() || pred.empty()) {
        throw DomainError("map_metrics: label shapes differ or are empty");
    }
    std::array<std::array<long, 3>, 3> confusion{};  // [gt][pred]
    for (std::size_t i = 0; i < pred.size(); ++i) {
        confusion[gt[i]][pred[i]] += 1;
    }

    MapMetrics m;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double iou_sum = 0.0, acc_sum = 0.0;
    int iou_n = 0, acc_n = 0;
    for (int k = 0; k < 3; ++k) {
        const long tp = confusion[k][k];
        long fp = 0, fn = 0;
        for (int j = 0; j < 3; ++j) {
            if (j == k) continue;
            fp += confusion[j][k];
            fn += confusion[k][j];
        }
        if (tp + fp + fn > 0) {
            m.iou[k] = static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
            iou_sum += m.iou[k];
            ++iou_n;
        } else {
            m.iou[k] = nan;  // class absent everywhere
        }
        if (tp + fn > 0) {
            m.class_accuracy[k] = static_cast<double>(tp) / static_cast<double>(tp + fn);
            acc_sum += m.class_accuracy[k];
            ++acc_n;
        } else {
            m.class_accuracy[k] = nan;
        }
    }
    m.miou = iou_n > 0 ? iou_sum / iou_n : nan;
    m.avg_accuracy = acc_n > 0 ? acc_sum / acc_n : nan;
    return m;
}

std::vector<std::uint8_t> argmax_labels(const BeliefStack& stack, RoomType r) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(stack.width()) * stack.height());
    for (int cy = 0; cy < stack.height(); ++cy) {
        for (int cx = 0; cx < stack.width(); ++cx) {
            out[stack.index(cx, cy)] = static_cast<std::uint8_t>(stack.argmax_class(r, cx, cy));
        }
    }
    return out;
}

std::vector<std::uint8_t> gt_labels(const SemanticGrid& grid, RoomType r) {
    std::vector<std::uint8_t> out(grid.cell_count());
    for (int cy = 0; cy < grid.height(); ++cy) {
        for (int cx = 0; cx < grid.width(); ++cx) {
            out[grid.index(cx, cy)] = static_cast<std::uint8_t>(grid.class3(cx, cy, r));
        }
    }
    return out;
}

std::string format_metrics_table(
    const std::vector<std::pair<std::string, MapMetrics>>& rows) {
    std::string out = "mapper        mIoU  Class-1  Class-2  Class-3      Avg\n";
    char line[160];
    for (const auto& [name, m] : rows) {
        std::snprintf(line, sizeof(line), "%-10s  %6.2f  %7.2f  %7.2f  %7.2f  %7.2f\n",
                      name.c_str(), 100.0 * m.miou, 100.0 * m.class_accuracy[0],
                      100.0 * m.class_accuracy[1], 100.0 * m.class_accuracy[2],
                      100.0 * m.avg_accuracy);
        out += line;
    }
    return out;
}

double cross_entropy(const BeliefStack& stack, const SemanticGrid& grid, RoomType r,
                     bool unobserved_only) {
    if (stack.width() != grid.width() || stack.height() != grid.height()) {
        throw DomainError("cross_entropy: stack and grid shapes differ");
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (int cy = 0; cy < grid.height(); ++cy) {
        for (int cx = 0; cx < grid.width(); ++cx) {
            if (unobserved_only && stack.observed(cx, cy)) continue;
            const int cls = grid.class3(cx, cy, r);
            const double p = stack.distribution(r, cx, cy)[cls];
            sum += -std::log(std::max(p, 1e-300));
            ++n;
        }
    }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

double mean_cross_entropy(const BeliefStack& stack, const SemanticGrid& grid,
                          bool unobserved_only) {
    double sum = 0.0;
    for (RoomType t : kAllRoomTypes) {
        sum += cross_entropy(stack, grid, t, unobserved_only);
    }
    return sum / kRoomTypeCount;
}

}  // namespace roomnav
