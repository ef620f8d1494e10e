#pragma once

#include "bird/fusion.hpp"
#include "bird/metrics.hpp"
#include "bird/network.hpp"
#include "bird/phd_filter.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bird {

enum class Mode { M1, M2, M3 };             // stand-alone, distributed, centralized
enum class Form { I, II, III };             // model of the posterior outside the local FoV
enum class FusionRule { Bird, StandardGci };

std::string to_string(Mode m);
std::string to_string(Form f);
std::string to_string(FusionRule r);
Mode parse_mode(const std::string& s);
Form parse_form(const std::string& s);
FusionRule parse_fusion(const std::string& s);

struct SensorConfig {
    int id = 1;
    Vec2 position = Vec2::Zero();
    Region fov = Region::all();
    double detection = 0.98;
    double clutter_rate = 10.0;
    double noise_std = 10.0;  // m, per axis
};

/// Piecewise-constant-velocity change applied at `step`.
struct Maneuver {
    int step = 0;
    Vec2 velocity = Vec2::Zero();
};

struct TrackConfig {
    std::string label;
    int birth = 0;  // first step alive
    int death = 0;  // last step alive
    Vec4 initial = Vec4::Zero();
    std::vector<Maneuver> maneuvers;
};

struct ScenarioConfig {
    std::string name = "custom";
    int duration = 100;       // steps 0 .. duration-1
    double dt = 1.0;
    double sigma_w = 5.0;     // filter process noise (m/s^2)
    double truth_sigma_w = 0.0;
    double survival = 0.98;
    Rect bounding_box{0.0, 2000.0, 0.0, 2000.0};
    std::vector<SensorConfig> sensors;
    NetworkGraph network;
    std::vector<TrackConfig> tracks;

    BirthParams birth{};
    PruneMergeParams prune{};
    int mass_samples = kDefaultMassSamples;

    Mode mode = Mode::M2;
    Form form = Form::III;
    FusionRule fusion = FusionRule::Bird;
    WeightSchedule schedule{};
    int consensus_steps = 3;
    bool m3_feedback = true;

    std::uint64_t seed = 42;
    int runs = 1;

    double ospa_cutoff = 100.0;
    double ospa_order = 2.0;
    int steady_state_start = 10;

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

/// Truth state of every alive track, per step.
struct TruthStep {
    std::vector<int> track;  // index into cfg.tracks
    std::vector<Vec4> state;
};
using Truth = std::vector<TruthStep>;

struct NodeStep {
    std::vector<Vec4> estimates;
    OspaResult ospa;
    double cardinality = 0.0;  // number of extracted estimates
    double lambda = 0.0;
};

struct TrialResult {
    Mode mode = Mode::M1;
    Form form = Form::III;
    Truth truth;
    std::vector<int> node_ids;
    std::vector<std::vector<NodeStep>> nodes;  // [node][step]
};

/// Truth trajectories from the CV motion model (noise-free when truth_sigma_w == 0).
Truth generate_truth(const ScenarioConfig& cfg, Rng& rng);

/// One scan: Bernoulli(P_D) detections of in-FoV objects with N(0, R) noise,
/// plus Poisson(clutter_rate) clutter uniform over the FoV.
std::vector<Vec2> generate_measurements(const std::vector<Vec4>& states, const SensorConfig& sensor,
                                        const Rect& bounding_box, Rng& rng);

/// Filter-side sensor model and survival profile implied by a posterior form.
SensorModel filter_sensor_model(const SensorConfig& sensor, Form form, const Rect& bounding_box);
SurvivalProfile filter_survival(const SensorConfig& sensor, Form form, double survival);

/// Run one trial. Trial index `trial` selects the random streams
/// (truth and measurements are shared across modes for the same trial).
TrialResult run_trial(const ScenarioConfig& cfg, Mode mode, Form form, int trial);

struct AggregateStep {
    double ospa_total = 0.0;
    double ospa_loc = 0.0;
    double ospa_card = 0.0;
    double card_est_mean = 0.0;
    double card_true = 0.0;
};

struct Aggregate {
    Mode mode = Mode::M1;
    Form form = Form::III;
    int runs = 0;
    std::vector<int> node_ids;
    std::vector<std::vector<AggregateStep>> nodes;  // [node][step]

    /// Mean OSPA over steps >= steady_state_start for node index n.
    [[nodiscard]] double steady_ospa(std::size_t n, int steady_state_start) const;
    /// Mean |card_est_mean - card_true| over steady-state steps.
    [[nodiscard]] double steady_card_error(std::size_t n, int steady_state_start) const;
    /// Max |card_est_mean - card_true| over steady-state steps.
    [[nodiscard]] double max_card_error(std::size_t n, int steady_state_start) const;
};

/// `runs` independent trials of (cfg, mode, form), averaged per node and step.
/// Trials run on up to `threads` workers; results do not depend on the thread count.
Aggregate monte_carlo(const ScenarioConfig& cfg, Mode mode, Form form, int runs, int threads = 1,
                      std::vector<TrialResult>* trials = nullptr);

/// Worker count from BIRD_THREADS (default 1).
int threads_from_env();

/// Five sensors with overlapping square FoVs tracking six objects with staggered
/// birth and death times.
ScenarioConfig paper_scenario();

/// Two sensors with overlapping FoVs and one object crossing from one exclusive
/// region through the common region into the other.
ScenarioConfig two_agent_scenario();

/// Built-in scenario by name (paper-fig6, two-agent); nullopt if unknown.
std::optional<ScenarioConfig> builtin_scenario(const std::string& name);

} // namespace bird
