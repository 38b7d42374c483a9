// roomnav command-line driver: house generation, episode datasets, prior
// training, agent rollouts, and SPL evaluation.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "roomnav/belief.hpp"
#include "roomnav/episodes.hpp"
#include "roomnav/eval.hpp"
#include "roomnav/generator.hpp"
#include "roomnav/layout_io.hpp"
#include "roomnav/nav.hpp"
#include "roomnav/priors.hpp"
#include "roomnav/render.hpp"

namespace fs = std::filesystem;
using namespace roomnav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ext) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<SemanticGrid> load_corpus(const fs::path& dir) {
    std::vector<SemanticGrid> corpus;
    for (const fs::path& p : sorted_files(dir, ".layout")) {
        corpus.push_back(load_layout_file(p.string()));
    }
    if (corpus.empty()) throw ValidationError("no .layout files in " + dir.string());
    return corpus;
}

HouseLibrary load_houses(const fs::path& dir) {
    HouseLibrary lib;
    for (const fs::path& p : sorted_files(dir, ".layout")) {
        lib.add(p.stem().string(), load_layout_file(p.string()));
    }
    if (lib.empty()) throw ValidationError("no .layout files in " + dir.string());
    return lib;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& p, const std::string& data) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + p.string());
    out << data;
    if (!out) throw IoError("write failed: " + p.string());
}

GenParams parse_gen_params(std::uint64_t seed, double ew, double eh, int rmin, int rmax,
                           double door, const std::vector<std::string>& adj_specs) {
    GenParams params;
    params.rng_seed = seed;
    params.extent_w_m = ew;
    params.extent_h_m = eh;
    params.room_count_min = rmin;
    params.room_count_max = rmax;
    params.door_width_m = door;
    if (adj_specs.empty()) {
        params.adjacency_rules = default_adjacency_rules();
    } else {
        for (const std::string& spec : adj_specs) {
            AdjacencyRule rule;
            const auto c1 = spec.find(',');
            const auto c2 = spec.find(',', c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos) {
                throw ValidationError("bad --adj value '" + spec +
                                      "', expected TypeA,TypeB,prob");
            }
            const auto a = room_type_from_name(spec.substr(0, c1));
            const auto b = room_type_from_name(spec.substr(c1 + 1, c2 - c1 - 1));
            if (!a || !b) throw ValidationError("bad room type in --adj value '" + spec + "'");
            rule.a = *a;
            rule.b = *b;
            rule.probability = std::stod(spec.substr(c2 + 1));
            params.adjacency_rules.push_back(rule);
        }
    }
    return params;
}

int cmd_gen_houses(int n, std::uint64_t seed, const std::string& out,
                   const GenParams& base) {
    fs::create_directories(out);
    for (int i = 0; i < n; ++i) {
        GenParams params = base;
        params.rng_seed = combine_seed(seed, static_cast<std::uint64_t>(i));
        const SemanticGrid grid = generate_house(params);
        char name[64];
        std::snprintf(name, sizeof(name), "house_%04d.layout", i);
        save_layout_file(grid, (fs::path(out) / name).string());
    }
    std::cout << "wrote " << n << " layouts to " << out << "\n";
    return kExitOk;
}

int cmd_gen_episodes(const std::string& houses_dir, int n, std::uint64_t seed,
                     const std::string& out) {
    const HouseLibrary lib = load_houses(houses_dir);
    std::vector<std::string> ids;
    for (const auto& [id, grid] : lib.houses()) ids.push_back(id);

    Rng rng(seed);
    std::vector<Episode> episodes;
    episodes.reserve(n);
    for (int i = 0; i < n; ++i) {
        const std::string& id = ids[rng.uniform_index(ids.size())];
        episodes.push_back(sample_episode(lib.at(id), id, lib.hash_of(id), rng));
    }
    write_file(out, write_dataset(episodes));
    std::cout << "wrote " << n << " episodes to " << out << "\n";
    return kExitOk;
}

int cmd_train_priors(const std::string& corpus_dir, double alpha, const std::string& out) {
    const std::vector<SemanticGrid> corpus = load_corpus(corpus_dir);
    const PriorModel model = PriorModel::train(corpus, alpha);
    save_prior_file(model, out);
    std::cout << "trained prior on " << model.corpus_size() << " houses ("
              << model.skipped_houses() << " skipped, no kitchen), alpha "
              << model.alpha() << " -> " << out << "\n";
    return kExitOk;
}

int cmd_run(const std::string& dataset_path, const std::string& houses_dir,
            const std::string& variant_str, const std::string& prior_path,
            const std::string& out, bool renders, unsigned workers) {
    const Variant variant = variant_from_name(variant_str);
    const HouseLibrary lib = load_houses(houses_dir);
    const std::vector<Episode> episodes = read_dataset(read_file(dataset_path));

    PriorModel model;  // uniform unless a trained prior is supplied
    if (!prior_path.empty()) {
        model = load_prior_file(prior_path);
    } else if (variant == Variant::Ours || variant == Variant::NoMaps) {
        throw ValidationError("variant '" + variant_str + "' needs --prior");
    }
    const BeliefEngine engine(model);
    const AgentConfig config;

    fs::create_directories(out);
    const EvalReport report = evaluate(lib, episodes, engine, config, {variant}, workers);
    for (std::size_t i = 0; i < report.logs[0].size(); ++i) {
        const TrajectoryLog& log = report.logs[0][i];
        char name[64];
        std::snprintf(name, sizeof(name), "ep_%05zu_%s", i, log.variant.c_str());
        write_file(fs::path(out) / (std::string(name) + ".traj"), write_trajectory(log));
        if (renders) {
            const SemanticGrid& grid = lib.resolve(log.episode);
            write_ppm_file(render_trajectory(grid, log),
                           (fs::path(out) / (std::string(name) + ".ppm")).string());
        }
    }
    std::cout << report.table_text();
    return kExitOk;
}

int cmd_eval(const std::string& logs_dir, const std::string& dataset_path,
             const std::string& houses_dir, const std::string& csv_out) {
    const std::vector<Episode> episodes = read_dataset(read_file(dataset_path));
    std::map<std::string, std::string> hash_of_id;
    for (const Episode& e : episodes) hash_of_id[e.house_id] = e.house_hash;

    std::vector<TrajectoryLog> logs;
    for (const fs::path& p : sorted_files(logs_dir, ".traj")) {
        logs.push_back(load_trajectory_file(p.string()));
    }
    if (logs.empty()) throw ValidationError("no .traj files in " + logs_dir);

    for (const TrajectoryLog& log : logs) {
        const auto it = hash_of_id.find(log.house_id);
        if (it == hash_of_id.end()) {
            throw ValidationError("log references house '" + log.house_id +
                                  "' absent from the dataset");
        }
        if (it->second != log.house_hash) {
            throw ValidationError("house hash mismatch for '" + log.house_id + "'");
        }
    }

    std::map<std::string, std::vector<const TrajectoryLog*>> by_variant;
    for (const TrajectoryLog& log : logs) by_variant[log.variant].push_back(&log);

    EvalReport report;
    for (int vi = 0; vi < kVariantCount; ++vi) {
        const Variant v = static_cast<Variant>(vi);
        const auto it = by_variant.find(variant_name(v));
        if (it == by_variant.end()) continue;
        VariantAggregate agg;
        agg.variant = v;
        agg.n = static_cast<int>(it->second.size());
        double spl = 0.0;
        int succ = 0;
        for (const TrajectoryLog* log : it->second) {
            spl += log->spl;
            succ += log->success ? 1 : 0;
        }
        agg.mean_spl = spl / agg.n;
        agg.success_rate = static_cast<double>(succ) / agg.n;
        report.rows.push_back(agg);
    }
    std::cout << report.table_text();

    if (!houses_dir.empty()) {
        const HouseLibrary lib = load_houses(houses_dir);
        // replay check: recomputed scores must match the stored footers
        for (const TrajectoryLog& log : logs) {
            const SemanticGrid& grid = lib.resolve(log.episode);
            const EpisodeScore s = score_episode(log, log.episode, grid);
            if (s.success != log.success || s.spl != log.spl) {
                throw ValidationError("stored footer disagrees with rescoring for '" +
                                      log.house_id + "'");
            }
        }
        std::cout << "\npoint error (final prediction vs GT point):\n";
        for (int vi = 0; vi < kVariantCount; ++vi) {
            const Variant v = static_cast<Variant>(vi);
            const auto it = by_variant.find(variant_name(v));
            if (it == by_variant.end()) continue;
            std::vector<TrajectoryLog> vlogs;
            for (const TrajectoryLog* log : it->second) vlogs.push_back(*log);
            const PointErrorStats pe = point_error(vlogs, lib);
            if (pe.n == 0) continue;
            char line[128];
            std::snprintf(line, sizeof(line), "%-10s  mean %.3fm  miss %.4f  n %d\n",
                          variant_name(v), pe.mean_error_m, pe.miss_rate, pe.n);
            std::cout << line;
        }
    }

    if (!csv_out.empty()) write_file(csv_out, report.table_csv());
    return kExitOk;
}

int cmd_fig2(const std::string& corpus_dir, const std::string& out) {
    const std::vector<SemanticGrid> corpus = load_corpus(corpus_dir);
    const AlignedCounts acc = align_and_accumulate(corpus);
    fs::create_directories(out);

    const auto to_field = [&](const std::vector<std::uint32_t>& counts) {
        std::vector<double> f(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) {
            f[i] = counts[i] / static_cast<double>(acc.houses);
        }
        return f;
    };
    for (RoomType t : kAllRoomTypes) {
        const Image img = render_heatmap(to_field(acc.room[static_cast<int>(t)]),
                                         kCanonicalFrame, kCanonicalFrame,
                                         room_type_color(t));
        write_ppm_file(img, (fs::path(out) / (std::string("fig2_") + room_type_name(t) +
                                              ".ppm")).string());
    }
    write_ppm_file(render_heatmap(to_field(acc.outside), kCanonicalFrame, kCanonicalFrame,
                                  {60, 60, 60}),
                   (fs::path(out) / "fig2_Outside.ppm").string());
    std::cout << "aligned " << acc.houses << " houses (" << acc.skipped
              << " skipped), heatmaps in " << out << "\n";
    return kExitOk;
}

// Scripted evaluation of map quality: walk each house for a few steps,
// then compare the fused and prior-only stacks against the ground truth
// over all room types (three-way classification).
int cmd_map_eval(const std::string& houses_dir, const std::string& prior_path,
                 int walk_steps) {
    const HouseLibrary lib = load_houses(houses_dir);
    const PriorModel model = load_prior_file(prior_path);
    const BeliefEngine engine(model);

    std::vector<std::uint8_t> gt_all, fused_all, prior_all;
    double ce_fused = 0.0, ce_prior = 0.0;
    int n_houses = 0;
    for (const auto& [id, world] : lib.houses()) {
        BeliefStack fused = engine.make_stack(world.width(), world.height(),
                                              world.resolution());
        const BeliefStack prior_only = engine.make_stack(world.width(), world.height(),
                                                         world.resolution());
        Pose pose;
        bool placed = false;
        for (int cy = 0; cy < world.height() && !placed; ++cy) {
            for (int cx = 0; cx < world.width(); ++cx) {
                if (world.navigable(cx, cy)) {
                    const Point c = world.cell_center(cx, cy);
                    pose = {c.x, c.y, 0.0};
                    placed = true;
                    break;
                }
            }
        }
        SensorParams sensor;
        for (int t = 0; t < walk_steps; ++t) {
            fused.update(observe(world, pose, pose, sensor));
            const StepResult sr = step(world, pose, Action::Forward);
            pose = sr.collided ? step(world, pose, Action::TurnLeft).pose : sr.pose;
        }
        for (RoomType r : kAllRoomTypes) {
            const auto gt = gt_labels(world, r);
            const auto f = argmax_labels(fused, r);
            const auto p = argmax_labels(prior_only, r);
            gt_all.insert(gt_all.end(), gt.begin(), gt.end());
            fused_all.insert(fused_all.end(), f.begin(), f.end());
            prior_all.insert(prior_all.end(), p.begin(), p.end());
        }
        ce_fused += mean_cross_entropy(fused, world);
        ce_prior += mean_cross_entropy(prior_only, world);
        ++n_houses;
    }
    std::cout << format_metrics_table({{"prior", map_metrics(prior_all, gt_all)},
                                       {"fused", map_metrics(fused_all, gt_all)}});
    std::printf("cross-entropy (nats): prior %.4f, fused %.4f over %d houses, %d-step walks\n",
                ce_prior / n_houses, ce_fused / n_houses, n_houses, walk_steps);
    return kExitOk;
}

int cmd_render(const std::string& layout_path, const std::string& out) {
    const SemanticGrid grid = load_layout_file(layout_path);
    write_ppm_file(render_grid(grid), out);
    std::cout << "rendered " << layout_path << " -> " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale room navigation simulator and evaluation suite"};
    app.require_subcommand(1);

    // gen-houses
    auto* gen = app.add_subcommand("gen-houses", "generate procedural house layouts");
    int gen_n = 10;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    double gen_ew = 15.0, gen_eh = 12.0, gen_door = 0.5;
    int gen_rmin = 4, gen_rmax = 7;
    std::vector<std::string> gen_adj;
    gen->add_option("--n", gen_n, "number of houses");
    gen->add_option("--seed", gen_seed, "root seed");
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--extent-w", gen_ew, "footprint width, meters");
    gen->add_option("--extent-h", gen_eh, "footprint height, meters");
    gen->add_option("--rooms-min", gen_rmin, "minimum room count");
    gen->add_option("--rooms-max", gen_rmax, "maximum room count");
    gen->add_option("--door-width", gen_door, "door width, meters");
    gen->add_option("--adj", gen_adj,
                    "adjacency rule TypeA,TypeB,prob (repeatable; default ruleset "
                    "when omitted)");

    // gen-episodes
    auto* gep = app.add_subcommand("gen-episodes", "sample a navigation episode dataset");
    std::string gep_houses, gep_out;
    int gep_n = 100;
    std::uint64_t gep_seed = 0;
    gep->add_option("--houses", gep_houses, "layout directory")->required();
    gep->add_option("--n", gep_n, "number of episodes");
    gep->add_option("--seed", gep_seed, "root seed");
    gep->add_option("--out", gep_out, "output dataset file")->required();

    // train-priors
    auto* tp = app.add_subcommand("train-priors", "learn aligned fields and co-occurrence");
    std::string tp_corpus, tp_out;
    double tp_alpha = 1.0;
    tp->add_option("--corpus", tp_corpus, "layout directory")->required();
    tp->add_option("--alpha", tp_alpha, "Laplace pseudo-count");
    tp->add_option("--out", tp_out, "output model file")->required();

    // run
    auto* run = app.add_subcommand("run", "run one agent variant over a dataset");
    std::string run_dataset, run_houses, run_variant = "ours", run_prior, run_out;
    bool run_no_renders = false;
    unsigned run_workers = 0;
    run->add_option("--dataset", run_dataset, "episode dataset file")->required();
    run->add_option("--houses", run_houses, "layout directory")->required();
    run->add_option("--variant", run_variant, "ours|no_maps|gt_maps|gt_point|random");
    run->add_option("--prior", run_prior, "trained prior model file");
    run->add_option("--out", run_out, "output directory for logs and renders")->required();
    run->add_flag("--no-renders", run_no_renders, "skip PPM renders");
    run->add_option("--workers", run_workers, "worker threads (0 = auto)");

    // eval
    auto* ev = app.add_subcommand("eval", "aggregate trajectory logs into the ladder table");
    std::string ev_logs, ev_dataset, ev_houses, ev_csv;
    ev->add_option("--logs", ev_logs, "directory of .traj files")->required();
    ev->add_option("--dataset", ev_dataset, "episode dataset file")->required();
    ev->add_option("--houses", ev_houses, "layout directory (enables rescoring checks)");
    ev->add_option("--csv", ev_csv, "also write the table as CSV");

    // fig2
    auto* fig = app.add_subcommand("fig2", "aligned room-frequency heatmaps");
    std::string fig_corpus, fig_out;
    fig->add_option("--corpus", fig_corpus, "layout directory")->required();
    fig->add_option("--out", fig_out, "output directory")->required();

    // map-eval
    auto* me = app.add_subcommand("map-eval",
                                  "three-way map classification quality after a scripted walk");
    std::string me_houses, me_prior;
    int me_steps = 20;
    me->add_option("--houses", me_houses, "layout directory")->required();
    me->add_option("--prior", me_prior, "trained prior model file")->required();
    me->add_option("--steps", me_steps, "walk length per house");

    // render
    auto* ren = app.add_subcommand("render", "render one layout to PPM");
    std::string ren_layout, ren_out;
    ren->add_option("--layout", ren_layout, "layout file")->required();
    ren->add_option("--out", ren_out, "output PPM file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const GenParams params = parse_gen_params(gen_seed, gen_ew, gen_eh, gen_rmin,
                                                      gen_rmax, gen_door, gen_adj);
            return cmd_gen_houses(gen_n, gen_seed, gen_out, params);
        }
        if (gep->parsed()) return cmd_gen_episodes(gep_houses, gep_n, gep_seed, gep_out);
        if (tp->parsed()) return cmd_train_priors(tp_corpus, tp_alpha, tp_out);
        if (run->parsed()) {
            return cmd_run(run_dataset, run_houses, run_variant, run_prior, run_out,
                           !run_no_renders, run_workers);
        }
        if (ev->parsed()) return cmd_eval(ev_logs, ev_dataset, ev_houses, ev_csv);
        if (fig->parsed()) return cmd_fig2(fig_corpus, fig_out);
        if (me->parsed()) return cmd_map_eval(me_houses, me_prior, me_steps);
        if (ren->parsed()) return cmd_render(ren_layout, ren_out);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
