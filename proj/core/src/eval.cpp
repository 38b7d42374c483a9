#include "roomnav/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>
#include <thread>

namespace roomnav {

EpisodeScore score_episode(const TrajectoryLog& log, const Episode& episode,
                           const SemanticGrid& grid) {
    if (log.house_hash != episode.house_hash) {
        throw ValidationError("score_episode: log and episode house hashes differ");
    }
    if (log.steps.empty()) {
        throw ValidationError("score_episode: empty trajectory");
    }
    const TrajectoryStep& last = log.steps.back();
    const bool stopped = last.action == Action::Stop;
    if (!stopped && static_cast<int>(log.steps.size()) != episode.max_steps) {
        throw ValidationError("score_episode: log neither stops nor runs to the cap");
    }

    int forwards = 0;
    for (const TrajectoryStep& s : log.steps) {
        if (s.action == Action::Forward && !s.collided) ++forwards;
    }

    EpisodeScore score;
    score.steps = static_cast<int>(log.steps.size());
    score.path_len = kForwardStepM * static_cast<double>(forwards);
    score.geodesic_len = episode.geodesic_len;

    const int cx = grid.cell_of_x(last.pose.x);
    const int cy = grid.cell_of_y(last.pose.y);
    score.success =
        stopped && grid.cell_inside_room_type(cx, cy, episode.target_type, kRoomInsetM);
    score.spl = score.success
        ? episode.geodesic_len / std::max(episode.geodesic_len, score.path_len)
        : 0.0;

    if (score.spl < 0.0 || score.spl > 1.0 || (score.spl > 0.0 && !score.success)) {
        throw ValidationError("score_episode: SPL invariant violated");
    }
    return score;
}

namespace {

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

std::string EvalReport::table_text() const {
    std::ostringstream os;
    os << "variant     mean_spl  success_rate     n\n";
    for (const VariantAggregate& r : rows) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-10s  %8.4f  %12.4f  %4d\n",
                      variant_name(r.variant), r.mean_spl, r.success_rate, r.n);
        os << line;
    }
    return os.str();
}

std::string EvalReport::table_csv() const {
    std::ostringstream os;
    os << "variant,mean_spl,success_rate,n\n";
    for (const VariantAggregate& r : rows) {
        os << variant_name(r.variant) << "," << fmt4(r.mean_spl) << ","
           << fmt4(r.success_rate) << "," << r.n << "\n";
    }
    return os.str();
}

const VariantAggregate& EvalReport::row(Variant v) const {
    for (const VariantAggregate& r : rows) {
        if (r.variant == v) return r;
    }
    throw DomainError("variant not present in report");
}

EvalReport evaluate(const HouseLibrary& houses, const std::vector<Episode>& episodes,
                    const BeliefEngine& engine, const AgentConfig& config,
                    const std::vector<Variant>& variants, unsigned workers) {
    EvalReport report;
    report.variants = variants;
    report.logs.resize(variants.size());
    if (episodes.empty()) return report;

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, episodes.size());

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        const Variant v = variants[vi];
        std::vector<TrajectoryLog> logs(episodes.size());

        auto run_range = [&](std::size_t begin, std::size_t stride) {
            for (std::size_t i = begin; i < episodes.size(); i += stride) {
                const SemanticGrid& grid = houses.resolve(episodes[i]);
                logs[i] = run_agent(grid, episodes[i], engine, config, v);
            }
        };
        if (workers <= 1) {
            run_range(0, 1);
        } else {
            std::vector<std::future<void>> futures;
            for (unsigned wkr = 0; wkr < workers; ++wkr) {
                futures.push_back(std::async(std::launch::async, run_range, wkr, workers));
            }
            for (auto& f : futures) f.get();
        }

        VariantAggregate agg;
        agg.variant = v;
        agg.n = static_cast<int>(episodes.size());
        double spl_sum = 0.0;
        int successes = 0;
        for (const TrajectoryLog& log : logs) {
            spl_sum += log.spl;
            successes += log.success ? 1 : 0;
        }
        agg.mean_spl = spl_sum / static_cast<double>(agg.n);
        agg.success_rate = static_cast<double>(successes) / static_cast<double>(agg.n);
        report.rows.push_back(agg);
        report.logs[vi] = std::move(logs);
    }
    return report;
}

PointErrorStats point_error(const std::vector<TrajectoryLog>& logs,
                            const HouseLibrary& houses) {
    PointErrorStats stats;
    double err_sum = 0.0;
    int misses = 0;
    for (const TrajectoryLog& log : logs) {
        if (log.steps.empty() || !log.steps.back().has_prediction()) continue;
        const SemanticGrid& grid = houses.resolve(log.episode);
        const Point pred = log.steps.back().pred;
        err_sum += std::hypot(pred.x - log.episode.gt_point.x,
                              pred.y - log.episode.gt_point.y);

        const int cx = grid.cell_of_x(pred.x);
        const int cy = grid.cell_of_y(pred.y);
        bool inside = false;
        for (const RoomInstance& r : grid.rooms()) {
            if (r.type == log.episode.target_type && r.contains(cx, cy)) {
                inside = true;
                break;
            }
        }
        if (!inside) ++misses;
        ++stats.n;
    }
    if (stats.n > 0) {
        stats.mean_error_m = err_sum / static_cast<double>(stats.n);
        stats.miss_rate = static_cast<double>(misses) / static_cast<double>(stats.n);
    }
    return stats;
}

}  // namespace roomnav
