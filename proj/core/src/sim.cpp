#include "bird/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace bird {

namespace {

// Stream purposes.
enum : std::uint64_t { kTruth = 1, kMeasure = 2, kMarginal = 3, kFusion = 4 };

std::uint64_t u64(int v) { return static_cast<std::uint64_t>(static_cast<std::int64_t>(v)); }

std::vector<Vec2> positions(const std::vector<Vec4>& states) {
    std::vector<Vec2> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(position_of(s));
    return out;
}

} // namespace

std::string to_string(Mode m) {
    switch (m) {
    case Mode::M1: return "m1";
    case Mode::M2: return "m2";
    case Mode::M3: return "m3";
    }
    return "?";
}

std::string to_string(Form f) {
    switch (f) {
    case Form::I: return "1";
    case Form::II: return "2";
    case Form::III: return "3";
    }
    return "?";
}

std::string to_string(FusionRule r) { return r == FusionRule::Bird ? "bird" : "gci"; }

Mode parse_mode(const std::string& s) {
    if (s == "m1" || s == "M1") return Mode::M1;
    if (s == "m2" || s == "M2") return Mode::M2;
    if (s == "m3" || s == "M3") return Mode::M3;
    throw ConfigError("mode: expected m1, m2 or m3, got '" + s + "'");
}

Form parse_form(const std::string& s) {
    if (s == "1" || s == "I") return Form::I;
    if (s == "2" || s == "II") return Form::II;
    if (s == "3" || s == "III") return Form::III;
    throw ConfigError("form: expected 1, 2 or 3, got '" + s + "'");
}

FusionRule parse_fusion(const std::string& s) {
    if (s == "bird") return FusionRule::Bird;
    if (s == "gci" || s == "standard-gci") return FusionRule::StandardGci;
    throw ConfigError("fusion: expected bird or gci, got '" + s + "'");
}

void ScenarioConfig::validate() const {
    if (duration < 1) throw ConfigError("duration: must be >= 1");
    if (!(dt > 0.0)) throw ConfigError("dt: must be positive");
    if (sigma_w < 0.0) throw ConfigError("sigma_w: must be non-negative");
    if (truth_sigma_w < 0.0) throw ConfigError("truth_sigma_w: must be non-negative");
    if (survival < 0.0 || survival > 1.0) throw ConfigError("survival: must lie in [0, 1]");
    if (!bounding_box.bounded() || bounding_box.area() <= 0.0) {
        throw ConfigError("bounding_box: must be a bounded rectangle with positive area");
    }
    if (sensors.empty()) throw ConfigError("sensors: at least one sensor is required");
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const auto& s = sensors[i];
        const std::string where = "sensors[" + std::to_string(i) + "]";
        if (s.detection < 0.0 || s.detection > 1.0) throw ConfigError(where + ".detection: must lie in [0, 1]");
        if (s.clutter_rate < 0.0) throw ConfigError(where + ".clutter_rate: must be non-negative");
        if (!(s.noise_std > 0.0)) throw ConfigError(where + ".noise_std: must be positive");
        const auto box = s.fov.bounding_box();
        if (!box || box->xmin < bounding_box.xmin || box->xmax > bounding_box.xmax ||
            box->ymin < bounding_box.ymin || box->ymax > bounding_box.ymax) {
            throw ConfigError(where + ".fov: must lie within bounding_box");
        }
        if (!network.has_node(s.id)) throw ConfigError(where + ".id: not a node of the network");
    }
    if (network.size() != sensors.size()) throw ConfigError("network: node count must equal sensor count");
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        if (tracks[i].death <= tracks[i].birth) {
            throw ConfigError("tracks[" + std::to_string(i) + "].death: must be after birth");
        }
    }
    if (consensus_steps < 0) throw ConfigError("consensus_steps: must be >= 0");
    if (runs < 1) throw ConfigError("runs: must be >= 1");
    if (mass_samples < 1) throw ConfigError("mass_samples: must be >= 1");
    if (!(ospa_cutoff > 0.0)) throw ConfigError("ospa.cutoff: must be positive");
    if (!(ospa_order >= 1.0)) throw ConfigError("ospa.order: must be >= 1");
    if (form == Form::III && fusion != FusionRule::Bird && mode != Mode::M1) {
        throw ConfigError("fusion: form 3 requires bird fusion");
    }
    if (form != Form::III && fusion == FusionRule::Bird && mode != Mode::M1) {
        throw ConfigError("fusion: forms 1 and 2 pair with standard gci");
    }
}

Truth generate_truth(const ScenarioConfig& cfg, Rng& rng) {
    const MotionModel motion = MotionModel::constant_velocity(cfg.dt, cfg.truth_sigma_w);
    const Eigen::LLT<Mat4> q_chol(motion.Q + 1e-300 * Mat4::Identity());
    std::normal_distribution<double> normal;
    Truth truth(cfg.duration);
    for (std::size_t t = 0; t < cfg.tracks.size(); ++t) {
        const auto& track = cfg.tracks[t];
        Vec4 x = track.initial;
        for (int k = track.birth; k <= track.death && k < cfg.duration; ++k) {
            if (k > track.birth) {
                x = motion.F * x;
                if (cfg.truth_sigma_w > 0.0) {
                    Vec4 z;
                    for (int i = 0; i < 4; ++i) z(i) = normal(rng);
                    x += q_chol.matrixL() * z;
                }
            }
            for (const auto& m : track.maneuvers) {
                if (m.step == k) x.tail<2>() = m.velocity;
            }
            if (k < 0) continue;
            truth[k].track.push_back(static_cast<int>(t));
            truth[k].state.push_back(x);
        }
    }
    return truth;
}

std::vector<Vec2> generate_measurements(const std::vector<Vec4>& states, const SensorConfig& sensor,
                                        const Rect& bounding_box, Rng& rng) {
    std::vector<Vec2> z;
    std::bernoulli_distribution detect(sensor.detection);
    std::normal_distribution<double> noise(0.0, sensor.noise_std);
    for (const auto& x : states) {
        if (!contains_state(sensor.fov, x)) continue;
        if (!detect(rng)) continue;
        const double ex = noise(rng);
        const double ey = noise(rng);
        z.emplace_back(x(0) + ex, x(1) + ey);
    }
    if (sensor.clutter_rate > 0.0) {
        std::poisson_distribution<int> count(sensor.clutter_rate);
        const int n = count(rng);
        const Rect box = sensor.fov.bounding_box().value_or(bounding_box);
        std::uniform_real_distribution<double> ux(box.xmin, box.xmax);
        std::uniform_real_distribution<double> uy(box.ymin, box.ymax);
        for (int i = 0; i < n; ++i) {
            Vec2 p;
            do {
                const double px = ux(rng);
                const double py = uy(rng);
                p = Vec2(px, py);
            } while (!sensor.fov.contains(p));
            z.push_back(p);
        }
    }
    return z;
}

SensorModel filter_sensor_model(const SensorConfig& sensor, Form form, const Rect& bounding_box) {
    SensorModel m;
    m.R = sensor.noise_std * sensor.noise_std * Mat2::Identity();
    m.fov = sensor.fov;
    m.detect_inside = sensor.detection;
    m.detect_outside = form == Form::II ? 0.0 : sensor.detection;
    m.clutter_rate = sensor.clutter_rate;
    m.clutter_region = sensor.fov.bounding_box() ? sensor.fov
                                                 : Region::rect(bounding_box.xmin, bounding_box.xmax,
                                                                bounding_box.ymin, bounding_box.ymax);
    return m;
}

SurvivalProfile filter_survival(const SensorConfig& sensor, Form, double survival) {
    return {survival, survival, sensor.fov};
}

TrialResult run_trial(const ScenarioConfig& cfg, Mode mode, Form form, int trial) {
    const std::uint64_t master = cfg.seed;
    const std::size_t n_nodes = cfg.sensors.size();
    const MotionModel motion = MotionModel::constant_velocity(cfg.dt, cfg.sigma_w);

    std::vector<SensorConfig> sensors = cfg.sensors;
    std::sort(sensors.begin(), sensors.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

    TrialResult result;
    result.mode = mode;
    result.form = form;
    {
        Rng rng = make_stream(master, {u64(trial), kTruth});
        result.truth = generate_truth(cfg, rng);
    }
    for (const auto& s : sensors) result.node_ids.push_back(s.id);
    result.nodes.assign(n_nodes, std::vector<NodeStep>(cfg.duration));

    std::vector<SensorModel> models;
    std::vector<SurvivalProfile> survival;
    for (const auto& s : sensors) {
        models.push_back(filter_sensor_model(s, form, cfg.bounding_box));
        survival.push_back(filter_survival(s, form, cfg.survival));
    }

    FusionOptions fopts;
    fopts.mass_samples = cfg.mass_samples;
    fopts.prune = cfg.prune;
    const bool bird = form == Form::III;

    std::vector<PoissonPosterior> state(n_nodes);
    std::vector<std::vector<Vec2>> previous_scan(n_nodes);

    for (int k = 0; k < cfg.duration; ++k) {
        const auto& truth_now = result.truth[k].state;
        const auto truth_pos = positions(truth_now);

        std::vector<PoissonPosterior> updated(n_nodes);
        for (std::size_t n = 0; n < n_nodes; ++n) {
            Rng mrng = make_stream(master, {u64(trial), kMeasure, u64(sensors[n].id), u64(k)});
            auto scan = generate_measurements(truth_now, sensors[n], cfg.bounding_box, mrng);
            const auto birth = adaptive_birth(previous_scan[n], cfg.birth);
            const auto predicted = phd_predict(state[n], motion, survival[n], birth);
            updated[n] = phd_update(predicted, scan, models[n], cfg.prune);
            previous_scan[n] = std::move(scan);
        }

        std::vector<PoissonPosterior> report(n_nodes);
        if (mode == Mode::M1) {
            state = updated;
            report = updated;
        } else {
            std::vector<LocalPosterior> locals(n_nodes);
            for (std::size_t n = 0; n < n_nodes; ++n) {
                if (bird) {
                    Rng rng = make_stream(master, {u64(trial), kMarginal, u64(sensors[n].id), u64(k)});
                    locals[n] = {marginalize_to_fov(updated[n], sensors[n].fov, rng, cfg.mass_samples),
                                 sensors[n].fov};
                } else {
                    // Standard GCI: posteriors are taken over the whole plane, no decomposition.
                    locals[n] = {updated[n], Region::all()};
                }
            }
            const std::uint64_t fusion_seed = derive_seed(master, {u64(trial), kFusion, u64(k)});
            if (mode == Mode::M2) {
                const auto fused =
                    run_consensus(locals, cfg.network, cfg.consensus_steps, cfg.schedule, fusion_seed, fopts);
                for (std::size_t n = 0; n < n_nodes; ++n) {
                    state[n] = fused[n].posterior;
                    report[n] = fused[n].posterior;
                }
            } else {
                Rng rng{fusion_seed};
                const auto fused = sequential_bird(locals, cfg.schedule, rng, fopts);
                for (std::size_t n = 0; n < n_nodes; ++n) {
                    state[n] = cfg.m3_feedback ? fused.posterior : updated[n];
                    report[n] = fused.posterior;
                }
            }
        }

        for (std::size_t n = 0; n < n_nodes; ++n) {
            NodeStep& out = result.nodes[n][k];
            out.estimates = extract_estimates(report[n]);
            out.lambda = report[n].lambda;
            out.cardinality = static_cast<double>(out.estimates.size());
            const auto est_pos = positions(out.estimates);
            out.ospa = ospa(est_pos, truth_pos, cfg.ospa_cutoff, cfg.ospa_order);
        }
    }
    return result;
}

double Aggregate::steady_ospa(std::size_t n, int steady_state_start) const {
    double sum = 0.0;
    int count = 0;
    for (std::size_t k = static_cast<std::size_t>(std::max(0, steady_state_start)); k < nodes[n].size(); ++k) {
        sum += nodes[n][k].ospa_total;
        ++count;
    }
    return count ? sum / count : 0.0;
}

double Aggregate::steady_card_error(std::size_t n, int steady_state_start) const {
    double sum = 0.0;
    int count = 0;
    for (std::size_t k = static_cast<std::size_t>(std::max(0, steady_state_start)); k < nodes[n].size(); ++k) {
        sum += std::abs(nodes[n][k].card_est_mean - nodes[n][k].card_true);
        ++count;
    }
    return count ? sum / count : 0.0;
}

double Aggregate::max_card_error(std::size_t n, int steady_state_start) const {
    double worst = 0.0;
    for (std::size_t k = static_cast<std::size_t>(std::max(0, steady_state_start)); k < nodes[n].size(); ++k) {
        worst = std::max(worst, std::abs(nodes[n][k].card_est_mean - nodes[n][k].card_true));
    }
    return worst;
}

int threads_from_env() {
    if (const char* env = std::getenv("BIRD_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

Aggregate monte_carlo(const ScenarioConfig& cfg, Mode mode, Form form, int runs, int threads,
                      std::vector<TrialResult>* trials) {
    if (runs < 1) throw PreconditionError("monte_carlo needs at least one run");
    std::vector<TrialResult> results(runs);
    threads = std::clamp(threads, 1, runs);
    if (threads == 1) {
        for (int t = 0; t < runs; ++t) results[t] = run_trial(cfg, mode, form, t);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (int t = w; t < runs; t += threads) results[t] = run_trial(cfg, mode, form, t);
            });
        }
        for (auto& th : pool) th.join();
    }

    Aggregate agg;
    agg.mode = mode;
    agg.form = form;
    agg.runs = runs;
    agg.node_ids = results.front().node_ids;
    const std::size_t n_nodes = agg.node_ids.size();
    agg.nodes.assign(n_nodes, std::vector<AggregateStep>(cfg.duration));
    // Fixed summation order (trial-major) keeps aggregates bit-reproducible.
    for (const auto& r : results) {
        for (std::size_t n = 0; n < n_nodes; ++n) {
            for (int k = 0; k < cfg.duration; ++k) {
                auto& a = agg.nodes[n][k];
                const auto& s = r.nodes[n][k];
                a.ospa_total += s.ospa.total;
                a.ospa_loc += s.ospa.localization;
                a.ospa_card += s.ospa.cardinality;
                a.card_est_mean += s.cardinality;
                a.card_true += static_cast<double>(r.truth[k].state.size());
            }
        }
    }
    for (auto& node : agg.nodes) {
        for (auto& a : node) {
            a.ospa_total /= runs;
            a.ospa_loc /= runs;
            a.ospa_card /= runs;
            a.card_est_mean /= runs;
            a.card_true /= runs;
        }
    }
    if (trials) *trials = std::move(results);
    return agg;
}

} // namespace bird

namespace bird {

namespace {

TrackConfig track(std::string label, int birth, int death, double x, double y, double vx, double vy) {
    TrackConfig t;
    t.label = std::move(label);
    t.birth = birth;
    t.death = death;
    t.initial = Vec4(x, y, vx, vy);
    return t;
}

SensorConfig sensor(int id, Region fov) {
    SensorConfig s;
    s.id = id;
    s.fov = std::move(fov);
    if (const auto box = s.fov.bounding_box()) {
        s.position = Vec2(0.5 * (box->xmin + box->xmax), 0.5 * (box->ymin + box->ymax));
    }
    return s;
}

} // namespace

ScenarioConfig paper_scenario() {
    ScenarioConfig cfg;
    cfg.name = "paper-fig6";
    // Lower than the library default so single clutter coincidences do not confirm tracks.
    cfg.birth.weight = 0.02;
    cfg.sensors = {
        sensor(1, Region::rect(0, 1100, 0, 1100)),
        sensor(2, Region::rect(900, 2000, 0, 1100)),
        sensor(3, Region::rect(0, 1100, 900, 2000)),
        sensor(4, Region::rect(900, 2000, 900, 2000)),
        sensor(5, Region::rect(600, 1400, 600, 1400)),
    };
    cfg.network = NetworkGraph({1, 2, 3, 4, 5},
                               {{1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 4}, {4, 3}, {4, 5}, {5, 4}, {2, 4}, {4, 2}});
    cfg.tracks = {
        track("T1", 0, 58, 200, 300, 20, 10),
        track("T2", 0, 50, 1800, 200, -20, 20),
        track("T3", 15, 70, 300, 1800, 18, -10),
        track("T4", 15, 70, 1700, 1700, -15, -18),
        track("T5", 33, 85, 1000, 150, 0, 25),
        track("T6", 43, 100, 150, 1000, 25, 5),
    };
    return cfg;
}

ScenarioConfig two_agent_scenario() {
    ScenarioConfig cfg;
    cfg.name = "two-agent";
    cfg.duration = 60;
    cfg.bounding_box = Rect{0.0, 2000.0, 0.0, 1000.0};
    cfg.sensors = {
        sensor(1, Region::rect(0, 1200, 0, 1000)),
        sensor(2, Region::rect(800, 2000, 0, 1000)),
    };
    cfg.network = NetworkGraph({1, 2}, {{1, 2}, {2, 1}});
    cfg.tracks = {track("T1", 0, 59, 150, 500, 30, 0)};
    cfg.consensus_steps = 1;
    return cfg;
}

std::optional<ScenarioConfig> builtin_scenario(const std::string& name) {
    if (name == "paper-fig6") return paper_scenario();
    if (name == "two-agent") return two_agent_scenario();
    return std::nullopt;
}

} // namespace bird
