#include "roomnav/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "roomnav/rng.hpp"

namespace roomnav {
namespace {

constexpr int kMinLeafSide = 5;   // cells, walls excluded
constexpr int kMaxAttempts = 32;
constexpr double kExtraDoorProb = 0.35;

struct Rect {
    int x0, y0, x1, y1;  // inclusive
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
    long area() const { return static_cast<long>(width()) * height(); }
};

struct Edge {
    int a, b;        // leaf indices
    bool vertical;   // wall is a vertical line (leaves side by side)
    int wall;        // wall column (vertical) or row (horizontal)
    int run0, run1;  // shared span along the wall, inclusive
};

bool splittable(const Rect& r, bool vertical) {
    const int side = vertical ? r.width() : r.height();
    return side >= 2 * kMinLeafSide + 1;
}

// Splits leaves largest-first until `target` leaves exist or nothing can split.
std::vector<Rect> bsp_split(Rect interior, int target, Rng& rng) {
    std::vector<Rect> leaves = {interior};
    while (static_cast<int>(leaves.size()) < target) {
        int best = -1;
        for (int i = 0; i < static_cast<int>(leaves.size()); ++i) {
            if (!splittable(leaves[i], true) && !splittable(leaves[i], false)) continue;
            if (best < 0 || leaves[i].area() > leaves[best].area()) best = i;
        }
        if (best < 0) break;

        Rect r = leaves[best];
        bool vertical;
        if (splittable(r, true) && splittable(r, false)) {
            vertical = r.width() != r.height() ? r.width() > r.height()
                                               : rng.bernoulli(0.5);
        } else {
            vertical = splittable(r, true);
        }
        if (vertical) {
            const int wall = rng.uniform_int(r.x0 + kMinLeafSide, r.x1 - kMinLeafSide);
            leaves[best] = {r.x0, r.y0, wall - 1, r.y1};
            leaves.push_back({wall + 1, r.y0, r.x1, r.y1});
        } else {
            const int wall = rng.uniform_int(r.y0 + kMinLeafSide, r.y1 - kMinLeafSide);
            leaves[best] = {r.x0, r.y0, r.x1, wall - 1};
            leaves.push_back({r.x0, wall + 1, r.x1, r.y1});
        }
    }
    std::sort(leaves.begin(), leaves.end(), [](const Rect& a, const Rect& b) {
        return a.y0 != b.y0 ? a.y0 < b.y0 : a.x0 < b.x0;
    });
    return leaves;
}

std::vector<Edge> leaf_adjacency(const std::vector<Rect>& leaves, int door_cells) {
    std::vector<Edge> edges;
    for (int i = 0; i < static_cast<int>(leaves.size()); ++i) {
        for (int j = i + 1; j < static_cast<int>(leaves.size()); ++j) {
            const Rect& a = leaves[i];
            const Rect& b = leaves[j];
            if (b.x0 - a.x1 == 2 || a.x0 - b.x1 == 2) {
                const int r0 = std::max(a.y0, b.y0);
                const int r1 = std::min(a.y1, b.y1);
                if (r1 - r0 + 1 >= door_cells) {
                    edges.push_back({i, j, true, b.x0 - a.x1 == 2 ? a.x1 + 1 : b.x1 + 1, r0, r1});
                }
            } else if (b.y0 - a.y1 == 2 || a.y0 - b.y1 == 2) {
                const int r0 = std::max(a.x0, b.x0);
                const int r1 = std::min(a.x1, b.x1);
                if (r1 - r0 + 1 >= door_cells) {
                    edges.push_back({i, j, false, b.y0 - a.y1 == 2 ? a.y1 + 1 : b.y1 + 1, r0, r1});
                }
            }
        }
    }
    return edges;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

int leaf_nearest_corner(const std::vector<Rect>& leaves,
                        const std::vector<char>& eligible, int ox, int oy) {
    int best = -1;
    long best_d = 0;
    for (int i = 0; i < static_cast<int>(leaves.size()); ++i) {
        if (!eligible[i]) continue;
        const long d = std::abs(static_cast<long>(leaves[i].x0) - ox) +
                       std::abs(static_cast<long>(leaves[i].y0) - oy);
        if (best < 0 || d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

int leaf_farthest_from(const std::vector<Rect>& leaves,
                       const std::vector<char>& eligible, const Rect& anchor) {
    const double ax = 0.5 * (anchor.x0 + anchor.x1);
    const double ay = 0.5 * (anchor.y0 + anchor.y1);
    int best = -1;
    double best_d = -1.0;
    for (int i = 0; i < static_cast<int>(leaves.size()); ++i) {
        if (!eligible[i]) continue;
        const double dx = 0.5 * (leaves[i].x0 + leaves[i].x1) - ax;
        const double dy = 0.5 * (leaves[i].y0 + leaves[i].y1) - ay;
        const double d = dx * dx + dy * dy;
        if (d > best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

struct AssignResult {
    std::vector<int> type_of_leaf;  // -1 = hall
    bool ok = false;
};

// Assigns room types to leaves honoring the adjacency rules. The rule
// Bernoulli draws are fixed per house before the geometry attempts, so a
// layout retry never re-rolls them and the realized frequencies stay
// unbiased. Returns ok=false when a draw cannot be satisfied on this
// geometry; the caller retries with a fresh BSP.
AssignResult assign_types(const std::vector<Rect>& leaves,
                          const std::vector<std::vector<char>>& adj,
                          int room_count, const std::vector<AdjacencyRule>& rules,
                          const std::vector<char>& rule_draws, Rng& rng) {
    const int n = static_cast<int>(leaves.size());
    AssignResult res;
    res.type_of_leaf.assign(n, -1);

    std::vector<RoomType> pool;
    for (const AdjacencyRule& r : rules) {
        for (RoomType t : {r.a, r.b}) {
            if (std::find(pool.begin(), pool.end(), t) == pool.end()) pool.push_back(t);
        }
    }
    if (pool.empty()) pool.assign(kAllRoomTypes.begin(), kAllRoomTypes.end());
    std::sort(pool.begin(), pool.end());

    int slots = room_count;
    std::vector<char> unassigned(n, 1);
    std::vector<int> first_leaf_of_type(kRoomTypeCount, -1);
    // rule index -> Bernoulli draw; only draws that came up false constrain later fills
    std::vector<char> rule_false(rules.size(), 0);

    auto has_type = [&](RoomType t) { return first_leaf_of_type[static_cast<int>(t)] >= 0; };
    auto place = [&](int leaf, RoomType t) {
        res.type_of_leaf[leaf] = static_cast<int>(t);
        unassigned[leaf] = 0;
        if (first_leaf_of_type[static_cast<int>(t)] < 0) {
            first_leaf_of_type[static_cast<int>(t)] = leaf;
        }
        --slots;
    };
    auto adjacent_to_type = [&](int leaf, RoomType t) {
        for (int j = 0; j < n; ++j) {
            if (res.type_of_leaf[j] == static_cast<int>(t) && adj[leaf][j]) return true;
        }
        return false;
    };
    // Placing type t on leaf must not realize an adjacency a false draw excluded.
    auto violates_false_rule = [&](int leaf, RoomType t) {
        for (std::size_t k = 0; k < rules.size(); ++k) {
            if (!rule_false[k]) continue;
            if (t == rules[k].b && adjacent_to_type(leaf, rules[k].a)) return true;
            if (t == rules[k].a && adjacent_to_type(leaf, rules[k].b)) return true;
        }
        return false;
    };
    auto random_unassigned = [&](auto&& pred) {
        std::vector<int> cand;
        for (int i = 0; i < n; ++i) {
            if (unassigned[i] && pred(i)) cand.push_back(i);
        }
        if (cand.empty()) return -1;
        return cand[rng.uniform_index(cand.size())];
    };

    const bool has_kitchen = std::find(pool.begin(), pool.end(), RoomType::Kitchen) != pool.end();
    if (has_kitchen && slots > 0) {
        const int k = leaf_nearest_corner(leaves, unassigned, leaves[0].x0, leaves[0].y0);
        place(k, RoomType::Kitchen);
    }

    for (std::size_t k = 0; k < rules.size(); ++k) {
        const AdjacencyRule& rule = rules[k];
        if (!has_type(rule.a)) {
            if (slots <= 0) continue;
            int leaf;
            if (rule.a == RoomType::Bedroom && has_type(RoomType::Kitchen)) {
                leaf = leaf_farthest_from(leaves, unassigned,
                                          leaves[first_leaf_of_type[static_cast<int>(RoomType::Kitchen)]]);
            } else {
                leaf = random_unassigned([&](int i) { return !violates_false_rule(i, rule.a); });
            }
            if (leaf < 0) return res;
            place(leaf, rule.a);
        }
        if (rule.a == rule.b || has_type(rule.b) || slots <= 0) continue;

        const int anchor = first_leaf_of_type[static_cast<int>(rule.a)];
        if (rule_draws[k]) {
            const int leaf = random_unassigned([&](int i) {
                return adj[anchor][i] && !violates_false_rule(i, rule.b);
            });
            if (leaf < 0) return res;
            place(leaf, rule.b);
        } else {
            rule_false[k] = 1;
            const int leaf = random_unassigned([&](int i) {
                return !adjacent_to_type(i, rule.a) && !violates_false_rule(i, rule.b);
            });
            if (leaf < 0) return res;
            place(leaf, rule.b);
        }
    }

    // positional defaults, then uniform fills from the pool
    if (slots > 0 && !has_type(RoomType::Bedroom) &&
        std::find(pool.begin(), pool.end(), RoomType::Bedroom) != pool.end() &&
        has_type(RoomType::Kitchen)) {
        std::vector<char> eligible(n, 0);
        for (int i = 0; i < n; ++i) {
            eligible[i] = unassigned[i] && !violates_false_rule(i, RoomType::Bedroom);
        }
        const int leaf = leaf_farthest_from(
            leaves, eligible, leaves[first_leaf_of_type[static_cast<int>(RoomType::Kitchen)]]);
        if (leaf >= 0) place(leaf, RoomType::Bedroom);
    }
    while (slots > 0) {
        std::vector<std::pair<int, RoomType>> options;
        for (int i = 0; i < n; ++i) {
            if (!unassigned[i]) continue;
            for (RoomType t : pool) {
                if (!violates_false_rule(i, t)) options.emplace_back(i, t);
            }
        }
        if (options.empty()) return res;  // geometry cannot honor the draws
        const auto [leaf, t] = options[rng.uniform_index(options.size())];
        place(leaf, t);
    }

    res.ok = true;
    return res;
}

}  // namespace

std::vector<AdjacencyRule> default_adjacency_rules() {
    return {
        {RoomType::Kitchen, RoomType::DiningRoom, 0.9},
        {RoomType::Bedroom, RoomType::Bathroom, 0.8},
        {RoomType::Kitchen, RoomType::LivingRoom, 0.6},
    };
}

SemanticGrid generate_house(const GenParams& params) {
    if (params.resolution <= 0.0 || params.extent_w_m <= 0.0 || params.extent_h_m <= 0.0) {
        throw DomainError("generator extents and resolution must be positive");
    }
    if (params.room_count_min < 1 || params.room_count_min > params.room_count_max) {
        throw DomainError("invalid room count range");
    }
    if (params.door_width_m <= 0.0) throw DomainError("door width must be positive");
    for (const AdjacencyRule& r : params.adjacency_rules) {
        if (r.probability < 0.0 || r.probability > 1.0) {
            throw DomainError("adjacency probabilities must lie in [0,1]");
        }
    }

    const double res = params.resolution;
    const int max_fp_w = static_cast<int>(std::floor(params.extent_w_m / res + 1e-9));
    const int max_fp_h = static_cast<int>(std::floor(params.extent_h_m / res + 1e-9));
    const int door_cells = std::max(2, static_cast<int>(std::lround(params.door_width_m / res)));

    // feasibility at full extent: interior tiled by minimal leaves
    const int full_iw = max_fp_w - 2;
    const int full_ih = max_fp_h - 2;
    const int max_leaves = std::max(0, (full_iw + 1) / (kMinLeafSide + 1)) *
                           std::max(0, (full_ih + 1) / (kMinLeafSide + 1));
    if (full_iw < kMinLeafSide || full_ih < kMinLeafSide ||
        max_leaves < params.room_count_min) {
        throw GenerationError("extent too small for the requested room count");
    }

    // rule outcomes are drawn once per house; geometry retries reuse them
    std::vector<char> rule_draws(params.adjacency_rules.size(), 0);
    {
        Rng rule_rng(combine_seed(params.rng_seed, 0x52554c45ULL));
        for (std::size_t k = 0; k < params.adjacency_rules.size(); ++k) {
            rule_draws[k] = rule_rng.bernoulli(params.adjacency_rules[k].probability) ? 1 : 0;
        }
    }

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rng rng(combine_seed(params.rng_seed, static_cast<std::uint64_t>(attempt)));

        // footprint shrinks a little per house so the outside class varies
        const int min_fp_w = std::min(max_fp_w, std::max(kMinLeafSide + 2,
                                      (params.room_count_min + 1) * (kMinLeafSide + 1)));
        const int min_fp_h = std::min(max_fp_h, kMinLeafSide * 2 + 3);
        const int fp_w = rng.uniform_int(std::max(min_fp_w, (7 * max_fp_w) / 10), max_fp_w);
        const int fp_h = rng.uniform_int(std::max(min_fp_h, (7 * max_fp_h) / 10), max_fp_h);

        const int room_count = rng.uniform_int(params.room_count_min, params.room_count_max);
        const int hall_leaves = rng.uniform_int(1, 2);

        const int m = kOutsideMarginCells;
        const int width = fp_w + 2 * m;
        const int height = fp_h + 2 * m;
        const Rect interior{m + 1, m + 1, m + fp_w - 2, m + fp_h - 2};

        std::vector<Rect> leaves = bsp_split(interior, room_count + hall_leaves, rng);
        if (static_cast<int>(leaves.size()) < room_count) continue;

        const std::vector<Edge> edges = leaf_adjacency(leaves, door_cells);
        const int n = static_cast<int>(leaves.size());
        // wall-sharing adjacency (any overlap), used for type placement;
        // door carving needs the wider shared runs in `edges`
        const std::vector<Edge> touching = leaf_adjacency(leaves, 1);
        std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
        for (const Edge& e : touching) adj[e.a][e.b] = adj[e.b][e.a] = 1;

        // doors: spanning tree for connectivity plus a few extra loops
        std::vector<int> order(edges.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
        }
        UnionFind uf(n);
        std::vector<char> carve(edges.size(), 0);
        int united = 1;
        for (int ei : order) {
            if (uf.unite(edges[ei].a, edges[ei].b)) {
                carve[ei] = 1;
                ++united;
            } else if (rng.bernoulli(kExtraDoorProb)) {
                carve[ei] = 1;
            }
        }
        if (united < n) continue;  // leaf graph not door-connectable

        AssignResult assign = assign_types(leaves, adj, room_count,
                                           params.adjacency_rules, rule_draws, rng);
        if (!assign.ok) continue;

        // paint cells
        std::vector<CellLabel> cells(static_cast<std::size_t>(width) * height,
                                     CellLabel::outside());
        auto at = [&](int cx, int cy) -> CellLabel& {
            return cells[static_cast<std::size_t>(cy) * width + cx];
        };
        for (int cy = m; cy < m + fp_h; ++cy) {
            for (int cx = m; cx < m + fp_w; ++cx) at(cx, cy) = CellLabel::wall();
        }
        for (int cy = interior.y0; cy <= interior.y1; ++cy) {
            for (int cx = interior.x0; cx <= interior.x1; ++cx) {
                at(cx, cy) = CellLabel::interior();
            }
        }
        // walls between leaves: everything in the interior not inside a leaf
        {
            std::vector<char> in_leaf(static_cast<std::size_t>(width) * height, 0);
            for (const Rect& leaf : leaves) {
                for (int cy = leaf.y0; cy <= leaf.y1; ++cy) {
                    for (int cx = leaf.x0; cx <= leaf.x1; ++cx) {
                        in_leaf[static_cast<std::size_t>(cy) * width + cx] = 1;
                    }
                }
            }
            for (int cy = interior.y0; cy <= interior.y1; ++cy) {
                for (int cx = interior.x0; cx <= interior.x1; ++cx) {
                    if (!in_leaf[static_cast<std::size_t>(cy) * width + cx]) {
                        at(cx, cy) = CellLabel::wall();
                    }
                }
            }
        }
        // carve doors
        for (std::size_t ei = 0; ei < edges.size(); ++ei) {
            if (!carve[ei]) continue;
            const Edge& e = edges[ei];
            const int pos = rng.uniform_int(e.run0, e.run1 - door_cells + 1);
            for (int k = 0; k < door_cells; ++k) {
                if (e.vertical) {
                    at(e.wall, pos + k) = CellLabel::interior();
                } else {
                    at(pos + k, e.wall) = CellLabel::interior();
                }
            }
        }

        // room instances in deterministic (y0, x0) order
        std::vector<RoomInstance> rooms;
        for (int i = 0; i < n; ++i) {
            if (assign.type_of_leaf[i] < 0) continue;
            RoomInstance room;
            room.id = static_cast<int>(rooms.size());
            room.type = static_cast<RoomType>(assign.type_of_leaf[i]);
            room.x0 = leaves[i].x0;
            room.y0 = leaves[i].y0;
            room.x1 = leaves[i].x1;
            room.y1 = leaves[i].y1;
            rooms.push_back(room);
            for (int cy = room.y0; cy <= room.y1; ++cy) {
                for (int cx = room.x0; cx <= room.x1; ++cx) {
                    at(cx, cy) = CellLabel::room(room.id);
                }
            }
        }

        return SemanticGrid(width, height, res, std::move(cells), std::move(rooms));
    }
    throw GenerationError("could not realize the requested layout constraints");
}

}  // namespace roomnav
