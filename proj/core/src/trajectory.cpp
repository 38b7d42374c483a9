#include "roomnav/trajectory.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace roomnav {
namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Ours: return "ours";
        case Variant::NoMaps: return "no_maps";
        case Variant::GtMaps: return "gt_maps";
        case Variant::GtPoint: return "gt_point";
        case Variant::Random: return "random";
    }
    return "unknown";
}

Variant variant_from_name(const std::string& name) {
    for (int i = 0; i < kVariantCount; ++i) {
        if (name == variant_name(static_cast<Variant>(i))) return static_cast<Variant>(i);
    }
    throw ParseError("unknown variant '" + name + "'");
}

std::string write_trajectory(const TrajectoryLog& log) {
    std::ostringstream os;
    os << "roomnav-traj 1\n";
    os << "house " << log.house_id << " " << log.house_hash << "\n";
    const Episode& e = log.episode;
    os << "episode " << fmt(e.start.x) << " " << fmt(e.start.y) << " "
       << fmt(e.start.heading_deg) << " " << room_type_name(e.target_type) << " "
       << fmt(e.gt_point.x) << " " << fmt(e.gt_point.y) << " " << fmt(e.geodesic_len)
       << " " << e.max_steps << "\n";
    os << "variant " << log.variant << "\n";
    os << "steps " << log.steps.size() << "\n";
    for (const TrajectoryStep& s : log.steps) {
        os << s.t << " " << fmt(s.pose.x) << " " << fmt(s.pose.y) << " "
           << fmt(s.pose.heading_deg) << " " << action_code(s.action) << " "
           << (s.collided ? 1 : 0) << " " << fmt(s.pred.x) << " " << fmt(s.pred.y)
           << " " << (s.frozen ? 1 : 0) << " " << fmt(s.reward) << "\n";
    }
    os << "end " << (log.success ? 1 : 0) << " " << fmt(log.spl) << " "
       << fmt(log.path_len) << " " << fmt(log.geodesic_len) << "\n";
    return os.str();
}

TrajectoryLog read_trajectory(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string word;
    auto expect = [&](const char* key) {
        if (!(is >> word) || word != key) {
            throw ParseError(std::string("trajectory: expected '") + key + "'");
        }
    };

    expect("roomnav-traj");
    int version = 0;
    if (!(is >> version) || version != 1) throw ParseError("trajectory: unsupported version");

    TrajectoryLog log;
    expect("house");
    if (!(is >> log.house_id >> log.house_hash)) throw ParseError("trajectory: bad house line");

    expect("episode");
    std::string type_name;
    Episode& e = log.episode;
    if (!(is >> e.start.x >> e.start.y >> e.start.heading_deg >> type_name >>
          e.gt_point.x >> e.gt_point.y >> e.geodesic_len >> e.max_steps)) {
        throw ParseError("trajectory: bad episode line");
    }
    const auto type = room_type_from_name(type_name);
    if (!type) throw ParseError("trajectory: unknown room type '" + type_name + "'");
    e.target_type = *type;
    e.house_id = log.house_id;
    e.house_hash = log.house_hash;

    expect("variant");
    if (!(is >> log.variant)) throw ParseError("trajectory: missing variant");
    variant_from_name(log.variant);  // validates

    expect("steps");
    std::size_t count = 0;
    if (!(is >> count)) throw ParseError("trajectory: bad step count");
    // istream extraction rejects "nan", which unpredicted steps emit
    auto read_double = [&](double& out) {
        std::string tok;
        if (!(is >> tok)) return false;
        char* end = nullptr;
        out = std::strtod(tok.c_str(), &end);
        return end == tok.c_str() + tok.size();
    };
    log.steps.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        TrajectoryStep s;
        std::string act;
        int collided = 0, frozen = 0;
        bool ok = (is >> s.t) && read_double(s.pose.x) && read_double(s.pose.y) &&
                  read_double(s.pose.heading_deg) && (is >> act) && (is >> collided) &&
                  read_double(s.pred.x) && read_double(s.pred.y) && (is >> frozen) &&
                  read_double(s.reward);
        if (!ok || act.size() != 1) {
            throw ParseError("trajectory: malformed step " + std::to_string(i));
        }
        s.action = action_from_code(act[0]);
        s.collided = collided != 0;
        s.frozen = frozen != 0;
        log.steps.push_back(s);
    }

    expect("end");
    int success = 0;
    if (!(is >> success >> log.spl >> log.path_len >> log.geodesic_len)) {
        throw ParseError("trajectory: bad footer");
    }
    log.success = success != 0;
    return log;
}

void save_trajectory_file(const TrajectoryLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    out << write_trajectory(log);
    if (!out) throw IoError("write failed: " + path);
}

TrajectoryLog load_trajectory_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_trajectory(buf.str());
}

}  // namespace roomnav
