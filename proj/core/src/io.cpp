#include "bird/io.hpp"

#include "json.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace bird::io {

using nlohmann::json;

namespace {

/// Rectangle bounds may be infinite; JSON has no infinity, so those are written as strings.
json bound(double v) {
    if (std::isfinite(v)) return v;
    return v > 0.0 ? "inf" : "-inf";
}

json region_json(const Region& r) {
    switch (r.kind()) {
    case Region::Kind::Empty: return {{"type", "empty"}};
    case Region::Kind::All: return {{"type", "all"}};
    case Region::Kind::Rect: {
        const auto& b = r.as_rect();
        return {{"type", "rect"}, {"xmin", bound(b.xmin)}, {"xmax", bound(b.xmax)},
                {"ymin", bound(b.ymin)}, {"ymax", bound(b.ymax)}};
    }
    case Region::Kind::Disc: {
        const auto& d = r.as_disc();
        return {{"type", "disc"}, {"cx", d.center.x()}, {"cy", d.center.y()}, {"r", d.radius}};
    }
    case Region::Kind::Union: return {{"type", "union"}, {"left", region_json(r.left())}, {"right", region_json(r.right())}};
    case Region::Kind::Intersect:
        return {{"type", "intersect"}, {"left", region_json(r.left())}, {"right", region_json(r.right())}};
    case Region::Kind::Difference:
        return {{"type", "diff"}, {"left", region_json(r.left())}, {"right", region_json(r.right())}};
    }
    return {};
}

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(where + "." + key + ": missing");
    return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
    const auto& v = field(j, key, where);
    if (v.is_string()) {
        const auto& text = v.get_ref<const std::string&>();
        if (text == "inf") return std::numeric_limits<double>::infinity();
        if (text == "-inf") return -std::numeric_limits<double>::infinity();
    }
    if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
    return v.get<double>();
}

template <class T>
void optional_number(const json& j, const char* key, const std::string& where, T& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
    out = v.get<T>();
}

Region parse_region(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected a region object");
    const auto& t = field(j, "type", where);
    if (!t.is_string()) throw ParseError(where + ".type: expected a string");
    const std::string type = t.get<std::string>();
    try {
        if (type == "empty") return Region::empty();
        if (type == "all") return Region::all();
        if (type == "rect") {
            return Region::rect(number(j, "xmin", where), number(j, "xmax", where), number(j, "ymin", where),
                                number(j, "ymax", where));
        }
        if (type == "disc") return Region::disc(number(j, "cx", where), number(j, "cy", where), number(j, "r", where));
    } catch (const PreconditionError& e) {
        throw ParseError(where + ": " + e.what());
    }
    if (type == "union" || type == "intersect" || type == "diff") {
        const Region a = parse_region(field(j, "left", where), where + ".left");
        const Region b = parse_region(field(j, "right", where), where + ".right");
        if (type == "union") return region_union(a, b);
        if (type == "intersect") return region_intersect(a, b);
        return region_difference(a, b);
    }
    throw ParseError(where + ".type: unknown region type '" + type + "'");
}

template <int N>
Eigen::Matrix<double, N, 1> vector_of(const json& j, const char* key, const std::string& where) {
    const auto& v = field(j, key, where);
    if (!v.is_array() || v.size() != N) {
        throw ParseError(where + "." + key + ": expected " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) {
        if (!v[i].is_number()) throw ParseError(where + "." + key + ": expected numbers");
        out(i) = v[i].get<double>();
    }
    return out;
}

json vec_json(const auto& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json parse_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

json posterior_json(const PoissonPosterior& post) {
    json comps = json::array();
    for (const auto& c : post.components) {
        json cov = json::array();
        for (int r = 0; r < 4; ++r)
            for (int k = 0; k < 4; ++k) cov.push_back(c.gaussian.cov(r, k));
        comps.push_back({{"w", c.gaussian.weight},
                         {"mean", vec_json(c.gaussian.mean)},
                         {"cov", cov},
                         {"mass", c.mass},
                         {"support", region_json(c.support)}});
    }
    return {{"version", kSchemaVersion}, {"lambda", post.lambda}, {"components", comps},
            {"domain", region_json(post.domain)}};
}

// Binary writer/reader. Values are stored little-endian regardless of host order.
class Writer {
public:
    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void region(const Region& r) {
        u8(static_cast<std::uint8_t>(r.kind()));
        switch (r.kind()) {
        case Region::Kind::Empty:
        case Region::Kind::All: break;
        case Region::Kind::Rect: {
            const auto& b = r.as_rect();
            f64(b.xmin), f64(b.xmax), f64(b.ymin), f64(b.ymax);
            break;
        }
        case Region::Kind::Disc: {
            const auto& d = r.as_disc();
            f64(d.center.x()), f64(d.center.y()), f64(d.radius);
            break;
        }
        default:
            region(r.left());
            region(r.right());
        }
    }
    std::vector<std::uint8_t> bytes;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& b) : bytes_(b) {}
    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    Region region(int depth = 0) {
        if (depth > 256) throw ParseError("posterior: region nesting too deep");
        const auto kind = static_cast<Region::Kind>(u8());
        switch (kind) {
        case Region::Kind::Empty: return Region::empty();
        case Region::Kind::All: return Region::all();
        case Region::Kind::Rect: {
            const double a = f64(), b = f64(), c = f64(), d = f64();
            return Region::rect(a, b, c, d);
        }
        case Region::Kind::Disc: {
            const double x = f64(), y = f64(), r = f64();
            return Region::disc(x, y, r);
        }
        case Region::Kind::Union:
        case Region::Kind::Intersect:
        case Region::Kind::Difference: {
            const Region a = region(depth + 1);
            const Region b = region(depth + 1);
            if (kind == Region::Kind::Union) return region_union(a, b);
            if (kind == Region::Kind::Intersect) return region_intersect(a, b);
            return region_difference(a, b);
        }
        }
        throw ParseError("posterior: unknown region tag");
    }
    [[nodiscard]] bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) throw ParseError("posterior: truncated record");
    }
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

constexpr std::uint32_t kMagic = 0x50445242;  // "BRDP"

std::string schedule_kind(const WeightSchedule& s) {
    return s.kind == WeightSchedule::Kind::RunningAverage ? "running-average" : "fixed";
}

} // namespace

std::string region_to_json(const Region& r) { return region_json(r).dump(); }

Region region_from_json(const std::string& text) { return parse_region(parse_text(text, "region"), "region"); }

ScenarioConfig scenario_from_json(const std::string& text) {
    const json j = parse_text(text, "scenario");
    if (!j.is_object()) throw ParseError("scenario: expected an object");
    if (!j.contains("version")) throw ParseError("version: missing");
    if (!j.at("version").is_number_integer() || j.at("version").get<int>() != kSchemaVersion) {
        throw ParseError("version: unsupported schema version");
    }

    ScenarioConfig cfg;
    const std::string root = "scenario";
    if (j.contains("name")) cfg.name = j.at("name").get<std::string>();
    optional_number(j, "duration", root, cfg.duration);
    optional_number(j, "dt", root, cfg.dt);
    optional_number(j, "sigma_w", root, cfg.sigma_w);
    optional_number(j, "truth_sigma_w", root, cfg.truth_sigma_w);
    optional_number(j, "survival", root, cfg.survival);
    optional_number(j, "mass_samples", root, cfg.mass_samples);
    optional_number(j, "consensus_steps", root, cfg.consensus_steps);
    optional_number(j, "runs", root, cfg.runs);
    optional_number(j, "steady_state_start", root, cfg.steady_state_start);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ParseError("seed: expected a non-negative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("m3_feedback")) cfg.m3_feedback = j.at("m3_feedback").get<bool>();
    if (j.contains("bounding_box")) {
        const auto& b = j.at("bounding_box");
        cfg.bounding_box = Rect{number(b, "xmin", "bounding_box"), number(b, "xmax", "bounding_box"),
                                number(b, "ymin", "bounding_box"), number(b, "ymax", "bounding_box")};
    }

    try {
        if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode").get<std::string>());
        if (j.contains("form")) {
            const auto& f = j.at("form");
            cfg.form = parse_form(f.is_number() ? std::to_string(f.get<int>()) : f.get<std::string>());
        }
        if (j.contains("fusion")) cfg.fusion = parse_fusion(j.at("fusion").get<std::string>());
    } catch (const json::exception& e) {
        throw ParseError(std::string("mode/form/fusion: ") + e.what());
    }

    const auto& sensors = field(j, "sensors", root);
    if (!sensors.is_array()) throw ParseError("sensors: expected an array");
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const std::string where = "sensors[" + std::to_string(i) + "]";
        const auto& s = sensors[i];
        SensorConfig sc;
        sc.id = static_cast<int>(number(s, "id", where));
        if (s.contains("position")) sc.position = vector_of<2>(s, "position", where);
        sc.fov = parse_region(field(s, "fov", where), where + ".fov");
        optional_number(s, "detection", where, sc.detection);
        optional_number(s, "clutter_rate", where, sc.clutter_rate);
        optional_number(s, "noise_std", where, sc.noise_std);
        cfg.sensors.push_back(sc);
    }

    const auto& net = field(j, "network", root);
    std::vector<int> ids;
    for (const auto& s : cfg.sensors) ids.push_back(s.id);
    if (net.contains("nodes")) ids = net.at("nodes").get<std::vector<int>>();
    std::vector<std::pair<int, int>> edges;
    const auto& ej = field(net, "edges", "network");
    if (!ej.is_array()) throw ParseError("network.edges: expected an array of [from, to] pairs");
    const bool bidirectional = net.value("bidirectional", false);
    for (const auto& e : ej) {
        if (!e.is_array() || e.size() != 2) throw ParseError("network.edges: expected [from, to] pairs");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        if (bidirectional) edges.emplace_back(e[1].get<int>(), e[0].get<int>());
    }
    try {
        cfg.network = NetworkGraph(ids, edges);
    } catch (const PreconditionError& e) {
        throw ParseError(std::string("network: ") + e.what());
    }

    if (j.contains("tracks")) {
        const auto& tracks = j.at("tracks");
        for (std::size_t i = 0; i < tracks.size(); ++i) {
            const std::string where = "tracks[" + std::to_string(i) + "]";
            const auto& t = tracks[i];
            TrackConfig tc;
            tc.label = t.value("label", "T" + std::to_string(i + 1));
            tc.birth = static_cast<int>(number(t, "birth", where));
            tc.death = static_cast<int>(number(t, "death", where));
            tc.initial = vector_of<4>(t, "initial", where);
            if (t.contains("maneuvers")) {
                for (const auto& m : t.at("maneuvers")) {
                    tc.maneuvers.push_back({static_cast<int>(number(m, "step", where + ".maneuvers")),
                                            vector_of<2>(m, "velocity", where + ".maneuvers")});
                }
            }
            cfg.tracks.push_back(tc);
        }
    }
    if (j.contains("birth")) {
        const auto& b = j.at("birth");
        optional_number(b, "weight", "birth", cfg.birth.weight);
        optional_number(b, "position_var", "birth", cfg.birth.position_var);
        optional_number(b, "velocity_std", "birth", cfg.birth.velocity_std);
    }
    if (j.contains("prune")) {
        const auto& p = j.at("prune");
        optional_number(p, "truncation", "prune", cfg.prune.truncation);
        optional_number(p, "merge", "prune", cfg.prune.merge);
        optional_number(p, "max_components", "prune", cfg.prune.max_components);
    }
    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        const std::string kind = s.value("kind", "running-average");
        if (kind == "running-average") {
            cfg.schedule.kind = WeightSchedule::Kind::RunningAverage;
        } else if (kind == "fixed") {
            cfg.schedule.kind = WeightSchedule::Kind::Fixed;
            optional_number(s, "omega", "schedule", cfg.schedule.fixed_omega);
            if (!(cfg.schedule.fixed_omega > 0.0 && cfg.schedule.fixed_omega < 1.0)) {
                throw ParseError("schedule.omega: must lie in (0, 1)");
            }
        } else {
            throw ParseError("schedule.kind: expected running-average or fixed");
        }
    }
    if (j.contains("ospa")) {
        optional_number(j.at("ospa"), "cutoff", "ospa", cfg.ospa_cutoff);
        optional_number(j.at("ospa"), "order", "ospa", cfg.ospa_order);
    }
    cfg.validate();
    return cfg;
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["version"] = kSchemaVersion;
    j["name"] = cfg.name;
    j["duration"] = cfg.duration;
    j["dt"] = cfg.dt;
    j["sigma_w"] = cfg.sigma_w;
    j["truth_sigma_w"] = cfg.truth_sigma_w;
    j["survival"] = cfg.survival;
    const auto& b = cfg.bounding_box;
    j["bounding_box"] = {{"xmin", b.xmin}, {"xmax", b.xmax}, {"ymin", b.ymin}, {"ymax", b.ymax}};
    json sensors = json::array();
    for (const auto& s : cfg.sensors) {
        sensors.push_back({{"id", s.id},
                           {"position", vec_json(s.position)},
                           {"fov", region_json(s.fov)},
                           {"detection", s.detection},
                           {"clutter_rate", s.clutter_rate},
                           {"noise_std", s.noise_std}});
    }
    j["sensors"] = sensors;
    json edges = json::array();
    for (const auto& [from, to] : cfg.network.edges()) {
        if (from != to) edges.push_back({from, to});
    }
    j["network"] = {{"nodes", cfg.network.nodes()}, {"edges", edges}};
    json tracks = json::array();
    for (const auto& t : cfg.tracks) {
        json man = json::array();
        for (const auto& m : t.maneuvers) man.push_back({{"step", m.step}, {"velocity", vec_json(m.velocity)}});
        tracks.push_back({{"label", t.label},
                          {"birth", t.birth},
                          {"death", t.death},
                          {"initial", vec_json(t.initial)},
                          {"maneuvers", man}});
    }
    j["tracks"] = tracks;
    j["birth"] = {{"weight", cfg.birth.weight},
                  {"position_var", cfg.birth.position_var},
                  {"velocity_std", cfg.birth.velocity_std}};
    j["prune"] = {{"truncation", cfg.prune.truncation},
                  {"merge", cfg.prune.merge},
                  {"max_components", cfg.prune.max_components}};
    j["mass_samples"] = cfg.mass_samples;
    j["mode"] = to_string(cfg.mode);
    j["form"] = to_string(cfg.form);
    j["fusion"] = to_string(cfg.fusion);
    j["schedule"] = {{"kind", schedule_kind(cfg.schedule)}, {"omega", cfg.schedule.fixed_omega}};
    j["consensus_steps"] = cfg.consensus_steps;
    j["m3_feedback"] = cfg.m3_feedback;
    j["seed"] = cfg.seed;
    j["runs"] = cfg.runs;
    j["ospa"] = {{"cutoff", cfg.ospa_cutoff}, {"order", cfg.ospa_order}};
    j["steady_state_start"] = cfg.steady_state_start;
    return j.dump(2);
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

std::vector<std::uint8_t> encode_posterior(const PoissonPosterior& post) {
    Writer w;
    w.u32(kMagic);
    w.u32(kSchemaVersion);
    w.f64(post.lambda);
    w.region(post.domain);
    w.u64(post.components.size());
    for (const auto& c : post.components) {
        w.f64(c.gaussian.weight);
        for (int i = 0; i < 4; ++i) w.f64(c.gaussian.mean(i));
        for (int r = 0; r < 4; ++r)
            for (int k = 0; k < 4; ++k) w.f64(c.gaussian.cov(r, k));
        w.f64(c.mass);
        w.region(c.support);
    }
    return std::move(w.bytes);
}

PoissonPosterior decode_posterior(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    if (r.u32() != kMagic) throw ParseError("posterior: bad magic");
    if (r.u32() != static_cast<std::uint32_t>(kSchemaVersion)) throw ParseError("posterior: unsupported version");
    PoissonPosterior post;
    post.lambda = r.f64();
    post.domain = r.region();
    const std::uint64_t n = r.u64();
    if (n > bytes.size()) throw ParseError("posterior: component count exceeds record size");
    post.components.resize(n);
    for (auto& c : post.components) {
        c.gaussian.weight = r.f64();
        for (int i = 0; i < 4; ++i) c.gaussian.mean(i) = r.f64();
        for (int row = 0; row < 4; ++row)
            for (int k = 0; k < 4; ++k) c.gaussian.cov(row, k) = r.f64();
        c.mass = r.f64();
        c.support = r.region();
    }
    if (!r.done()) throw ParseError("posterior: trailing bytes");
    return post;
}

std::string posterior_to_json(const PoissonPosterior& post) { return posterior_json(post).dump(); }

PoissonPosterior posterior_from_json(const std::string& text) {
    const json j = parse_text(text, "posterior");
    if (j.value("version", 0) != kSchemaVersion) throw ParseError("posterior.version: unsupported");
    PoissonPosterior post;
    post.lambda = number(j, "lambda", "posterior");
    post.domain = j.contains("domain") ? parse_region(j.at("domain"), "posterior.domain") : Region::all();
    for (const auto& cj : field(j, "components", "posterior")) {
        PoissonComponent c;
        c.gaussian.weight = number(cj, "w", "posterior.components");
        c.gaussian.mean = vector_of<4>(cj, "mean", "posterior.components");
        const auto cov = vector_of<16>(cj, "cov", "posterior.components");
        for (int r = 0; r < 4; ++r)
            for (int k = 0; k < 4; ++k) c.gaussian.cov(r, k) = cov(4 * r + k);
        if (cj.contains("mass")) c.mass = cj.at("mass").get<double>();
        if (cj.contains("support")) c.support = parse_region(cj.at("support"), "posterior.components.support");
        post.components.push_back(c);
    }
    return post;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_ospa_csv(std::ostream& os, const std::vector<Aggregate>& aggregates) {
    os << "mode,form,node,step,ospa_total,ospa_loc,ospa_card,card_est_mean,card_true\n";
    for (const auto& agg : aggregates) {
        for (std::size_t n = 0; n < agg.node_ids.size(); ++n) {
            for (std::size_t k = 0; k < agg.nodes[n].size(); ++k) {
                const auto& s = agg.nodes[n][k];
                os << to_string(agg.mode) << ',' << to_string(agg.form) << ',' << agg.node_ids[n] << ',' << k
                   << ',' << format_double(s.ospa_total) << ',' << format_double(s.ospa_loc) << ','
                   << format_double(s.ospa_card) << ',' << format_double(s.card_est_mean) << ','
                   << format_double(s.card_true) << '\n';
            }
        }
    }
}

void write_tracks_json(std::ostream& os, const std::vector<TrialResult>& trials) {
    json out = json::array();
    for (std::size_t t = 0; t < trials.size(); ++t) {
        const auto& trial = trials[t];
        json truth = json::array();
        for (std::size_t k = 0; k < trial.truth.size(); ++k) {
            json step = json::array();
            for (std::size_t i = 0; i < trial.truth[k].state.size(); ++i) {
                step.push_back({{"track", trial.truth[k].track[i]}, {"state", vec_json(trial.truth[k].state[i])}});
            }
            truth.push_back(step);
        }
        json nodes = json::array();
        for (std::size_t n = 0; n < trial.node_ids.size(); ++n) {
            json steps = json::array();
            for (const auto& s : trial.nodes[n]) {
                json est = json::array();
                for (const auto& e : s.estimates) est.push_back(vec_json(e));
                steps.push_back(est);
            }
            nodes.push_back({{"node", trial.node_ids[n]}, {"estimates", steps}});
        }
        out.push_back({{"trial", t},
                       {"mode", to_string(trial.mode)},
                       {"form", to_string(trial.form)},
                       {"truth", truth},
                       {"nodes", nodes}});
    }
    os << out.dump() << '\n';
}

void write_summary_json(std::ostream& os, const ScenarioConfig& cfg, const std::vector<Aggregate>& aggregates,
                        const std::string& git_describe) {
    json modes = json::array();
    for (const auto& agg : aggregates) {
        json nodes = json::array();
        for (std::size_t n = 0; n < agg.node_ids.size(); ++n) {
            nodes.push_back({{"node", agg.node_ids[n]},
                             {"steady_ospa", agg.steady_ospa(n, cfg.steady_state_start)},
                             {"steady_card_error", agg.steady_card_error(n, cfg.steady_state_start)}});
        }
        modes.push_back({{"mode", to_string(agg.mode)}, {"form", to_string(agg.form)}, {"runs", agg.runs},
                         {"nodes", nodes}});
    }
    const json j = {{"scenario", cfg.name},
                    {"config_hash", fnv1a_hex(scenario_to_json(cfg))},
                    {"seed", cfg.seed},
                    {"git_describe", git_describe},
                    {"results", modes}};
    os << j.dump(2) << '\n';
}

std::vector<Vec2> read_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open point file: " + path);
    std::vector<Vec2> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double x = 0.0;
        double y = 0.0;
        if (!(ss >> x)) {
            std::string rest;
            if (std::istringstream(line) >> rest) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'x y'");
            }
            continue;
        }
        std::string extra;
        if (!(ss >> y) || (ss >> extra)) throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'x y'");
        pts.emplace_back(x, y);
    }
    return pts;
}

} // namespace bird::io
