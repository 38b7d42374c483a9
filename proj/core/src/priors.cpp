#include "roomnav/priors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace roomnav {
namespace {

constexpr int kLL = kFullLabelCount * kFullLabelCount;

struct Footprint {
    int x0, y0, x1, y1;  // bounding box of non-Outside cells
};

Footprint footprint_of(const SemanticGrid& g) {
    Footprint f{g.width(), g.height(), -1, -1};
    for (int cy = 0; cy < g.height(); ++cy) {
        for (int cx = 0; cx < g.width(); ++cx) {
            if (g.label(cx, cy).is_outside()) continue;
            f.x0 = std::min(f.x0, cx);
            f.y0 = std::min(f.y0, cy);
            f.x1 = std::max(f.x1, cx);
            f.y1 = std::max(f.y1, cy);
        }
    }
    return f;
}

std::vector<std::uint8_t> full_labels(const SemanticGrid& g) {
    std::vector<std::uint8_t> labels(g.cell_count());
    for (int cy = 0; cy < g.height(); ++cy) {
        for (int cx = 0; cx < g.width(); ++cx) {
            labels[g.index(cx, cy)] = static_cast<std::uint8_t>(g.full_label(cx, cy));
        }
    }
    return labels;
}

void count_house_pairs(const SemanticGrid& g, int radius, std::uint32_t* counts) {
    const int w = g.width();
    const int h = g.height();
    const int span = 2 * radius + 1;
    const std::vector<std::uint8_t> labels = full_labels(g);

    for (int oy = 0; oy < h; ++oy) {
        for (int ox = 0; ox < w; ++ox) {
            const int l = labels[static_cast<std::size_t>(oy) * w + ox];
            const std::size_t l_base = static_cast<std::size_t>(l) * kFullLabelCount;
            const int ty0 = std::max(0, oy - radius);
            const int ty1 = std::min(h - 1, oy + radius);
            const int tx0 = std::max(0, ox - radius);
            const int tx1 = std::min(w - 1, ox + radius);
            for (int ty = ty0; ty <= ty1; ++ty) {
                const std::uint8_t* lrow = labels.data() + static_cast<std::size_t>(ty) * w;
                std::size_t base =
                    (static_cast<std::size_t>(ty - oy + radius) * span + (tx0 - ox + radius)) * kLL +
                    l_base;
                for (int tx = tx0; tx <= tx1; ++tx, base += kLL) {
                    ++counts[base + lrow[tx]];
                }
            }
        }
    }
}

}  // namespace

AlignedCounts align_and_accumulate(const std::vector<SemanticGrid>& corpus) {
    if (corpus.empty()) throw DomainError("align_and_accumulate: empty corpus");

    AlignedCounts acc;
    const std::size_t frame_cells = kCanonicalFrame * kCanonicalFrame;
    for (auto& f : acc.room) f.assign(frame_cells, 0);
    acc.outside.assign(frame_cells, 0);

    for (const SemanticGrid& g : corpus) {
        // kitchen anchor: bounding box over all kitchen-type cells
        int kx0 = g.width(), ky0 = g.height();
        bool has_kitchen = false;
        for (const RoomInstance& r : g.rooms()) {
            if (r.type != RoomType::Kitchen) continue;
            has_kitchen = true;
            kx0 = std::min(kx0, r.x0);
            ky0 = std::min(ky0, r.y0);
        }
        if (!has_kitchen) {
            ++acc.skipped;
            continue;
        }
        const Footprint fp = footprint_of(g);
        const int fw = fp.x1 - fp.x0 + 1;
        const int fh = fp.y1 - fp.y0 + 1;

        for (int v = 0; v < kCanonicalFrame; ++v) {
            const int hy = ky0 + static_cast<int>(std::floor((v + 0.5) * fh /
                                                             static_cast<double>(kCanonicalFrame)));
            for (int u = 0; u < kCanonicalFrame; ++u) {
                const int hx = kx0 + static_cast<int>(std::floor((u + 0.5) * fw /
                                                                 static_cast<double>(kCanonicalFrame)));
                const CellLabel c = g.label_clamped(hx, hy);
                const std::size_t i = static_cast<std::size_t>(v) * kCanonicalFrame + u;
                if (c.is_outside()) {
                    ++acc.outside[i];
                } else if (c.is_room()) {
                    ++acc.room[static_cast<int>(g.rooms()[c.room_instance()].type)][i];
                }
            }
        }
        ++acc.houses;
    }
    if (acc.houses == 0) {
        throw DomainError("align_and_accumulate: no house in the corpus has a kitchen");
    }
    return acc;
}

PairCounts train_cooccurrence(const std::vector<SemanticGrid>& corpus) {
    if (corpus.empty()) throw DomainError("train_cooccurrence: empty corpus");
    const double res = corpus.front().resolution();
    for (const SemanticGrid& g : corpus) {
        if (g.resolution() != res) {
            throw DomainError("train_cooccurrence: corpus resolutions differ");
        }
    }

    PairCounts pc;
    pc.resolution = res;
    pc.radius_cells = static_cast<int>(std::lround(kOffsetWindowM / res));
    pc.span = 2 * pc.radius_cells + 1;
    pc.houses = static_cast<int>(corpus.size());
    const std::size_t table = static_cast<std::size_t>(pc.span) * pc.span * kLL;
    pc.counts.assign(table, 0);

    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(corpus.size())));
    if (workers <= 1) {
        for (const SemanticGrid& g : corpus) {
            count_house_pairs(g, pc.radius_cells, pc.counts.data());
        }
        return pc;
    }

    // per-worker partial tables, reduced by integer addition (order-free)
    std::vector<std::future<std::vector<std::uint32_t>>> futures;
    for (unsigned w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w]() {
            std::vector<std::uint32_t> part(table, 0);
            for (std::size_t i = w; i < corpus.size(); i += workers) {
                count_house_pairs(corpus[i], pc.radius_cells, part.data());
            }
            return part;
        }));
    }
    for (auto& f : futures) {
        const std::vector<std::uint32_t> part = f.get();
        for (std::size_t i = 0; i < table; ++i) pc.counts[i] += part[i];
    }
    return pc;
}

PriorModel::PriorModel() {
    const std::size_t frame_cells = kCanonicalFrame * kCanonicalFrame;
    for (auto& f : fields_.room) f.assign(frame_cells, 0);
    fields_.outside.assign(frame_cells, 0);
    counts_.radius_cells = 0;
    counts_.span = 1;
    counts_.counts.assign(kLL, 0);
}

PriorModel PriorModel::train(const std::vector<SemanticGrid>& corpus, double alpha) {
    if (alpha <= 0.0) throw DomainError("prior smoothing alpha must be > 0");
    PriorModel m;
    m.alpha_ = alpha;
    m.fields_ = align_and_accumulate(corpus);
    m.counts_ = train_cooccurrence(corpus);
    return m;
}

double PriorModel::field_room(RoomType r, int u, int v) const {
    if (fields_.houses == 0) return 0.0;
    return fields_.room[static_cast<int>(r)][static_cast<std::size_t>(v) * kCanonicalFrame + u] /
           static_cast<double>(fields_.houses);
}

double PriorModel::field_outside(int u, int v) const {
    if (fields_.houses == 0) return 0.0;
    return fields_.outside[static_cast<std::size_t>(v) * kCanonicalFrame + u] /
           static_cast<double>(fields_.houses);
}

std::array<double, 3> PriorModel::conditional3(RoomType r, int origin_label,
                                               int dx, int dy) const {
    const double n_alpha = std::max(1, counts_.houses) * alpha_;
    std::array<double, 3> cnt = {0.0, 0.0, 0.0};
    double total = 0.0;
    if (counts_.houses > 0 && std::abs(dx) <= counts_.radius_cells &&
        std::abs(dy) <= counts_.radius_cells) {
        for (int m = 0; m < kFullLabelCount; ++m) {
            const double c = counts_.at(origin_label, m, dx, dy);
            cnt[class3_of_label(m, r)] += c;
            total += c;
        }
    }
    std::array<double, 3> p;
    for (int j = 0; j < 3; ++j) p[j] = (cnt[j] + n_alpha) / (total + 3.0 * n_alpha);
    return p;
}

std::array<double, 3> PriorModel::marginal3(RoomType r) const {
    const double n_alpha = std::max(1, counts_.houses) * alpha_;
    std::array<double, 3> cnt = {0.0, 0.0, 0.0};
    double total = 0.0;
    for (int l = 0; l < kFullLabelCount; ++l) {
        const double c = static_cast<double>(label_total(l));
        cnt[class3_of_label(l, r)] += c;
        total += c;
    }
    std::array<double, 3> p;
    for (int j = 0; j < 3; ++j) p[j] = (cnt[j] + n_alpha) / (total + 3.0 * n_alpha);
    return p;
}

std::uint64_t PriorModel::pair_count(int l, int m, int dx, int dy) const {
    if (counts_.houses == 0 || std::abs(dx) > counts_.radius_cells ||
        std::abs(dy) > counts_.radius_cells) {
        return 0;
    }
    return counts_.at(l, m, dx, dy);
}

std::uint64_t PriorModel::label_total(int l) const {
    // every cell pairs with itself at delta = 0
    if (counts_.houses == 0) return 0;
    return counts_.at(l, l, 0, 0);
}

namespace {

void write_u32_rle(std::ostringstream& os, const std::vector<std::uint32_t>& v) {
    std::size_t i = 0;
    int per_line = 0;
    while (i < v.size()) {
        if (v[i] == 0) {
            std::size_t j = i;
            while (j < v.size() && v[j] == 0) ++j;
            os << "z" << (j - i);
            i = j;
        } else {
            os << v[i];
            ++i;
        }
        if (++per_line == 32) {
            os << "\n";
            per_line = 0;
        } else {
            os << " ";
        }
    }
    if (per_line != 0) os << "\n";
}

void read_u32_rle(std::istringstream& is, std::vector<std::uint32_t>& v,
                  std::size_t total, const char* what) {
    v.clear();
    v.reserve(total);
    std::string tok;
    while (v.size() < total) {
        if (!(is >> tok)) throw ParseError(std::string("prior model truncated in ") + what);
        try {
            if (tok[0] == 'z') {
                const long run = std::stol(tok.substr(1));
                if (run <= 0 || v.size() + run > total) {
                    throw ParseError(std::string("prior model: bad zero run in ") + what);
                }
                v.insert(v.end(), run, 0);
            } else {
                const unsigned long val = std::stoul(tok);
                v.push_back(static_cast<std::uint32_t>(val));
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(std::string("prior model: bad token '") + tok + "' in " + what);
        }
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string PriorModel::serialize() const {
    std::ostringstream os;
    os << "roomnav-prior 1\n";
    os << "alpha " << fmt(alpha_) << "\n";
    os << "corpus " << counts_.houses << "\n";
    os << "aligned " << fields_.houses << "\n";
    os << "skipped " << fields_.skipped << "\n";
    os << "resolution " << fmt(counts_.resolution) << "\n";
    os << "window " << counts_.radius_cells << "\n";
    os << "frame " << kCanonicalFrame << "\n";
    os << "field outside\n";
    write_u32_rle(os, fields_.outside);
    for (RoomType t : kAllRoomTypes) {
        os << "field " << room_type_name(t) << "\n";
        write_u32_rle(os, fields_.room[static_cast<int>(t)]);
    }
    os << "pairs\n";
    write_u32_rle(os, counts_.counts);
    os << "end\n";
    return os.str();
}

PriorModel PriorModel::deserialize(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string word;
    auto expect = [&](const char* key) {
        if (!(is >> word) || word != key) {
            throw ParseError(std::string("prior model: expected '") + key + "'");
        }
    };
    expect("roomnav-prior");
    int version = 0;
    if (!(is >> version)) throw ParseError("prior model: missing version");
    if (version != 1) {
        throw ParseError("prior model: unsupported version " + std::to_string(version));
    }

    PriorModel m;
    expect("alpha");
    if (!(is >> m.alpha_) || m.alpha_ <= 0.0) throw ParseError("prior model: bad alpha");
    expect("corpus");
    if (!(is >> m.counts_.houses)) throw ParseError("prior model: bad corpus size");
    expect("aligned");
    if (!(is >> m.fields_.houses)) throw ParseError("prior model: bad aligned count");
    expect("skipped");
    if (!(is >> m.fields_.skipped)) throw ParseError("prior model: bad skipped count");
    expect("resolution");
    if (!(is >> m.counts_.resolution)) throw ParseError("prior model: bad resolution");
    expect("window");
    if (!(is >> m.counts_.radius_cells) || m.counts_.radius_cells < 0) {
        throw ParseError("prior model: bad window");
    }
    m.counts_.span = 2 * m.counts_.radius_cells + 1;
    expect("frame");
    int frame = 0;
    if (!(is >> frame) || frame != kCanonicalFrame) {
        throw ParseError("prior model: unsupported frame size");
    }

    const std::size_t frame_cells = kCanonicalFrame * kCanonicalFrame;
    expect("field");
    expect("outside");
    read_u32_rle(is, m.fields_.outside, frame_cells, "outside field");
    for (RoomType t : kAllRoomTypes) {
        expect("field");
        expect(room_type_name(t));
        read_u32_rle(is, m.fields_.room[static_cast<int>(t)], frame_cells, "room field");
    }
    expect("pairs");
    const std::size_t table = static_cast<std::size_t>(m.counts_.span) * m.counts_.span * kLL;
    read_u32_rle(is, m.counts_.counts, table, "pair counts");
    expect("end");
    return m;
}

void save_prior_file(const PriorModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    out << model.serialize();
    if (!out) throw IoError("write failed: " + path);
}

PriorModel load_prior_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return PriorModel::deserialize(buf.str());
}

}  // namespace roomnav
