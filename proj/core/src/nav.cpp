#include "roomnav/nav.hpp"

#include <algorithm>
#include <cmath>

#include "roomnav/eval.hpp"
#include "roomnav/hash.hpp"

namespace roomnav {
namespace {

constexpr double kRadToDeg = 57.29577951308232;

double signed_angle(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r > 180.0) r -= 360.0;
    if (r <= -180.0) r += 360.0;
    return r;
}

std::vector<std::uint8_t> believed_mask(const BeliefStack& stack) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(stack.width()) * stack.height());
    for (int cy = 0; cy < stack.height(); ++cy) {
        for (int cx = 0; cx < stack.width(); ++cx) {
            mask[stack.index(cx, cy)] = stack.believed_traversable(cx, cy) ? 1 : 0;
        }
    }
    return mask;
}

DistanceField believed_field(const BeliefStack& stack, const Pose& pose) {
    const int sx = static_cast<int>(std::floor(pose.x / stack.resolution()));
    const int sy = static_cast<int>(std::floor(pose.y / stack.resolution()));
    return shortest_path_field(stack.width(), stack.height(), stack.resolution(),
                               believed_mask(stack), sx, sy);
}

// 3x3 neighborhood minimum of P_in_tr: the believed analogue of the 0.2m
// room inset (off-world neighbors count as zero)
double inset_belief(const BeliefStack& stack, RoomType tr, int cx, int cy) {
    double score = 1.0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || nx >= stack.width() || ny < 0 || ny >= stack.height()) {
                return 0.0;
            }
            score = std::min(score, stack.distribution(tr, nx, ny)[kClassInRoom]);
        }
    }
    return score;
}

PointPrediction make_prediction(Point point, const Pose& pose, double confidence) {
    PointPrediction p;
    p.point = point;
    const double dx = point.x - pose.x;
    const double dy = point.y - pose.y;
    p.distance_m = std::hypot(dx, dy);
    p.bearing_deg = signed_angle(std::atan2(dy, dx) * kRadToDeg - pose.heading_deg);
    p.confidence = confidence;
    return p;
}

}  // namespace

std::optional<PointPrediction> select_point(const BeliefStack& stack, const Pose& pose,
                                            RoomType tr) {
    const int w = stack.width();
    const int h = stack.height();
    std::vector<double> p_in(static_cast<std::size_t>(w) * h);
    for (int cy = 0; cy < h; ++cy) {
        for (int cx = 0; cx < w; ++cx) {
            p_in[stack.index(cx, cy)] = stack.distribution(tr, cx, cy)[kClassInRoom];
        }
    }

    double best = 0.0;
    std::vector<std::size_t> tied;
    for (int cy = 0; cy < h; ++cy) {
        for (int cx = 0; cx < w; ++cx) {
            if (!stack.believed_traversable(cx, cy)) continue;
            // believed-inset score; off-world neighbors count as zero
            double score = p_in[stack.index(cx, cy)];
            for (int dy = -1; dy <= 1 && score > 0.0; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = cx + dx;
                    const int ny = cy + dy;
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) {
                        score = 0.0;
                        break;
                    }
                    score = std::min(score, p_in[stack.index(nx, ny)]);
                }
            }
            if (score <= 0.0) continue;
            if (score > best) {
                best = score;
                tied.assign(1, stack.index(cx, cy));
            } else if (score == best) {
                tied.push_back(stack.index(cx, cy));
            }
        }
    }
    if (tied.empty()) return std::nullopt;

    std::size_t chosen = tied.front();
    if (tied.size() > 1) {
        const DistanceField field = believed_field(stack, pose);
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i : tied) {
            const double d = field.meters(static_cast<int>(i % w), static_cast<int>(i / w));
            if (d < best_d) {
                best_d = d;
                chosen = i;
            }
        }
    }

    const int cx = static_cast<int>(chosen % w);
    const int cy = static_cast<int>(chosen / w);
    const Point center = {(cx + 0.5) * stack.resolution(), (cy + 0.5) * stack.resolution()};
    return make_prediction(center, pose, p_in[chosen]);
}

std::optional<Point> frontier_fallback(const BeliefStack& stack, const Pose& pose) {
    const int w = stack.width();
    const int h = stack.height();
    static constexpr int dx4[4] = {1, -1, 0, 0};
    static constexpr int dy4[4] = {0, 0, 1, -1};

    std::vector<std::size_t> frontier;
    for (int cy = 0; cy < h; ++cy) {
        for (int cx = 0; cx < w; ++cx) {
            if (stack.observed(cx, cy)) continue;
            bool adjacent_free = false;
            for (int n = 0; n < 4 && !adjacent_free; ++n) {
                const int nx = cx + dx4[n];
                const int ny = cy + dy4[n];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                if (!stack.observed(nx, ny)) continue;
                const int l = stack.observed_label(nx, ny);
                adjacent_free = l != kLabelOutside && l != kLabelWall;
            }
            if (adjacent_free) frontier.push_back(stack.index(cx, cy));
        }
    }
    if (frontier.empty()) return std::nullopt;

    const DistanceField field = believed_field(stack, pose);
    double best_d = std::numeric_limits<double>::infinity();
    std::size_t chosen = 0;
    bool found = false;
    for (std::size_t i : frontier) {
        const double d = field.meters(static_cast<int>(i % w), static_cast<int>(i / w));
        if (d < best_d) {
            best_d = d;
            chosen = i;
            found = true;
        }
    }
    if (!found) return std::nullopt;  // every frontier is sealed off
    return Point{(static_cast<int>(chosen % w) + 0.5) * stack.resolution(),
                 (static_cast<int>(chosen / w) + 0.5) * stack.resolution()};
}

double compute_reward(double prev_dist_m, double cur_dist_m, bool terminal,
                      bool success, double spl, RewardVariant variant) {
    if (prev_dist_m < 0.0 || cur_dist_m < 0.0) {
        throw DomainError("compute_reward: distances must be non-negative");
    }
    if (terminal) {
        if (variant == RewardVariant::RoomNav) return kTerminalReward * spl;
        return success ? kTerminalReward : 0.0;
    }
    return -(cur_dist_m - prev_dist_m) - kStepPenalty;
}

NavController::NavController(int width, int height, double resolution)
    : width_(width),
      height_(height),
      resolution_(resolution),
      traversable_(static_cast<std::size_t>(width) * height, 1) {}

void NavController::integrate(const Observation& obs) {
    for (const VisibleCell& vc : obs.visible_cells) {
        const std::size_t i = static_cast<std::size_t>(vc.cy) * width_ + vc.cx;
        const std::uint8_t want = vc.label.navigable() ? 1 : 0;
        if (traversable_[i] != want) {
            traversable_[i] = want;
            field_valid_ = false;
        }
    }
}

void NavController::seed_from(const BeliefStack& stack) {
    for (int cy = 0; cy < height_; ++cy) {
        for (int cx = 0; cx < width_; ++cx) {
            traversable_[static_cast<std::size_t>(cy) * width_ + cx] =
                stack.believed_traversable(cx, cy) ? 1 : 0;
        }
    }
    field_valid_ = false;
}

void NavController::mark_blocked(int cx, int cy) {
    if (cx < 0 || cx >= width_ || cy < 0 || cy >= height_) return;
    const std::size_t i = static_cast<std::size_t>(cy) * width_ + cx;
    if (traversable_[i] != 0) {
        traversable_[i] = 0;
        field_valid_ = false;
    }
}

Action NavController::plan_step(const Pose& pose, Point goal) {
    const int acx = static_cast<int>(std::floor(pose.x / resolution_));
    const int acy = static_cast<int>(std::floor(pose.y / resolution_));
    const int gcx = static_cast<int>(std::floor(goal.x / resolution_));
    const int gcy = static_cast<int>(std::floor(goal.y / resolution_));
    if (gcx < 0 || gcx >= width_ || gcy < 0 || gcy >= height_) return Action::Stop;
    if (acx == gcx && acy == gcy) return Action::Stop;

    if (!field_valid_ || goal_cx_ != gcx || goal_cy_ != gcy) {
        // corner-safe: the discrete motion cannot squeeze through touching
        // wall corners the plain octile graph would allow
        field_ = shortest_path_field(width_, height_, resolution_, traversable_,
                                     gcx, gcy, true);
        field_valid_ = true;
        goal_cx_ = gcx;
        goal_cy_ = gcy;
    }
    if (!field_.reachable(acx, acy)) return Action::Stop;

    // Aim by simulating the discrete motion: for every reachable heading,
    // score the cell one forward step actually lands in. Turning toward a
    // bearing whose motion clips a wall is what livelocks a bearing-only
    // rule, so Forward is only issued for the winning heading itself.
    int best_k = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    double best_turn = 0.0;
    for (int k = 0; k < 36; ++k) {
        const double h = 10.0 * k;
        const Dir2 d = heading_dir(h);
        const int cx = static_cast<int>(std::floor((pose.x + kForwardStepM * d.x) / resolution_));
        const int cy = static_cast<int>(std::floor((pose.y + kForwardStepM * d.y) / resolution_));
        if (cx < 0 || cx >= width_ || cy < 0 || cy >= height_) continue;
        if (cx == acx && cy == acy) continue;
        if (!traversable_[static_cast<std::size_t>(cy) * width_ + cx]) continue;
        if (!field_.reachable(cx, cy)) continue;
        const double dist = field_.meters(cx, cy);
        const double turn = std::abs(signed_angle(h - pose.heading_deg));
        if (dist < best_dist || (dist == best_dist && turn < best_turn)) {
            best_dist = dist;
            best_turn = turn;
            best_k = k;
        }
    }
    if (best_k < 0) return Action::Stop;  // enclosed on the believed map

    const double err = signed_angle(10.0 * best_k - pose.heading_deg);
    if (err == 0.0) return Action::Forward;
    if (std::abs(err) < kBearingToleranceDeg) {
        // off-lattice heading: move if the actual motion lands well
        const Dir2 d = heading_dir(pose.heading_deg);
        const int cx = static_cast<int>(std::floor((pose.x + kForwardStepM * d.x) / resolution_));
        const int cy = static_cast<int>(std::floor((pose.y + kForwardStepM * d.y) / resolution_));
        if (cx >= 0 && cx < width_ && cy >= 0 && cy < height_ &&
            traversable_[static_cast<std::size_t>(cy) * width_ + cx] &&
            field_.reachable(cx, cy)) {
            return Action::Forward;
        }
    }
    return err > 0.0 ? Action::TurnLeft : Action::TurnRight;
}

TrajectoryLog run_agent(const SemanticGrid& grid, const Episode& episode,
                        const BeliefEngine& engine, const AgentConfig& config,
                        Variant variant) {
    const RoomType tr = episode.target_type;

    TrajectoryLog log;
    log.house_id = episode.house_id;
    log.house_hash = episode.house_hash;
    log.variant = variant_name(variant);
    log.episode = episode;

    const bool gt_beliefs = variant == Variant::GtMaps || variant == Variant::GtPoint;
    BeliefStack stack = gt_beliefs
        ? BeliefStack::ground_truth(engine, grid)
        : engine.make_stack(grid.width(), grid.height(), grid.resolution());
    const bool update_stack = variant == Variant::Ours;
    const bool selecting = variant == Variant::Ours || variant == Variant::NoMaps ||
                           variant == Variant::GtMaps;

    NavController ctrl(grid.width(), grid.height(), grid.resolution());
    if (gt_beliefs) ctrl.seed_from(stack);  // oracle variants know the map
    const DistanceField reward_field = geodesic_field(grid, episode.gt_point);

    const std::string seed_key = episode.house_hash + "|" + write_dataset({episode}) +
                                 "|" + log.variant;
    Rng rng(fnv1a64(seed_key));

    Pose pose = episode.start;
    std::optional<PointPrediction> pred;
    if (variant == Variant::GtPoint) {
        pred = make_prediction(episode.gt_point, pose, 1.0);
    }

    auto dist_to_goal = [&](const Pose& p) {
        return reward_field.meters(grid.cell_of_x(p.x), grid.cell_of_y(p.y));
    };
    double prev_d = dist_to_goal(pose);

    for (int t = 0; t < config.max_steps; ++t) {
        const Observation obs = observe(grid, pose, episode.start, config.sensor);
        ctrl.integrate(obs);
        if (update_stack) stack.update(obs);

        if (selecting && t < config.freeze_step && t % config.repredict_period == 0) {
            log.predict_steps.push_back(t);
            std::optional<PointPrediction> p = select_point(stack, pose, tr);
            if (!p) {
                if (const auto f = frontier_fallback(stack, pose)) {
                    p = make_prediction(*f, pose, 0.0);
                }
            }
            if (p) pred = p;
        }
        if (pred) pred->frozen = t >= config.freeze_step;

        Action action;
        if (variant == Variant::Random) {
            action = t >= 60 ? Action::Stop
                             : static_cast<Action>(rng.uniform_index(3));
        } else if (!pred) {
            action = Action::Stop;  // nothing to navigate toward
        } else {
            const double d_pred = std::hypot(pose.x - pred->point.x, pose.y - pred->point.y);
            // gate on the believed inset, not the bare cell belief: cells a
            // wall away from the room edge fail the 0.2m success test
            const double own_belief =
                inset_belief(stack, tr, grid.cell_of_x(pose.x), grid.cell_of_y(pose.y));
            if (d_pred <= config.stop_radius_m && own_belief > 0.5) {
                action = Action::Stop;
            } else {
                action = ctrl.plan_step(pose, pred->point);
            }
        }

        const StepResult sr = step(grid, pose, action);
        if (sr.collided) {
            const Dir2 d = heading_dir(pose.heading_deg);
            ctrl.mark_blocked(grid.cell_of_x(pose.x + kForwardStepM * d.x),
                              grid.cell_of_y(pose.y + kForwardStepM * d.y));
        }

        const bool terminal = action == Action::Stop || t + 1 == config.max_steps;
        const double cur_d = dist_to_goal(sr.pose);
        double reward;
        if (terminal) {
            const bool success_now =
                action == Action::Stop &&
                grid.cell_inside_room_type(grid.cell_of_x(sr.pose.x),
                                           grid.cell_of_y(sr.pose.y), tr, kRoomInsetM);
            reward = compute_reward(prev_d, cur_d, true, success_now, 0.0,
                                    RewardVariant::PointNav);
        } else {
            reward = compute_reward(prev_d, cur_d, false, false, 0.0,
                                    RewardVariant::PointNav);
        }

        TrajectoryStep row;
        row.t = t;
        row.pose = sr.pose;
        row.action = action;
        row.collided = sr.collided;
        if (pred) row.pred = pred->point;
        row.frozen = pred ? pred->frozen : false;
        row.reward = reward;
        log.steps.push_back(row);

        pose = sr.pose;
        prev_d = cur_d;
        if (action == Action::Stop) break;
    }

    const EpisodeScore score = score_episode(log, episode, grid);
    log.success = score.success;
    log.spl = score.spl;
    log.path_len = score.path_len;
    log.geodesic_len = episode.geodesic_len;
    return log;
}

}  // namespace roomnav
