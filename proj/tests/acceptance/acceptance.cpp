#include <bird/fusion.hpp>
#include <bird/io.hpp>
#include <bird/metrics.hpp>
#include <bird/network.hpp>
#include <bird/oracle.hpp>
#include <bird/oracle_checks.hpp>
#include <bird/poisson.hpp>
#include <bird/rng.hpp>
#include <bird/sim.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace bird;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
    bool passed = false;
    std::string detail;
};

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, const std::string& title, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s [%2d] %s (%.1f s): %s\n", o.passed ? "PASS" : "FAIL", id, title.c_str(), seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Outcome oracle_outcome(const oracle::CheckResult& r, int min_cases, double seconds, double budget) {
    const bool ok = r.passed && r.cases >= min_cases && seconds < budget;
    return {ok, fmt("%d cases, worst %.3g (tol %.3g), %.2f s of %.0f s budget", r.cases, r.worst, r.tolerance,
                    seconds, budget)};
}

Outcome timed_oracle(oracle::CheckResult (*check)(const oracle::CheckOptions&), int cases, int min_cases,
                     double budget) {
    oracle::CheckOptions opts;
    opts.cells = 8;
    opts.n_max = 4;
    opts.cases = cases;
    opts.seed = 2024;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = check(opts);
    return oracle_outcome(r, min_cases, seconds_since(t0), budget);
}

// ---------------------------------------------------------------------------

Outcome pathology() {
    oracle::CheckOptions opts;
    const auto grid = oracle::check_gci_pathology(opts);

    auto cfg = two_agent_scenario();
    cfg.form = Form::I;
    cfg.fusion = FusionRule::StandardGci;
    cfg.mode = Mode::M3;
    cfg.validate();
    const Region common = region_intersect(cfg.sensors[0].fov, cfg.sensors[1].fov);
    const int trials = 20;
    long steps = 0, clean = 0;
    for (int t = 0; t < trials; ++t) {
        const auto r = run_trial(cfg, Mode::M3, Form::I, t);
        for (const auto& step : r.nodes[0]) {
            ++steps;
            bool outside = false;
            for (const auto& x : step.estimates) outside = outside || !common.contains(position_of(x));
            clean += !outside;
        }
    }
    const double share = static_cast<double>(clean) / static_cast<double>(steps);
    return {grid.passed && share >= 0.95,
            fmt("grid family worst ratio %.3g (%s); GM scale: %.1f%% of %ld steps with no estimate outside the "
                "common FoV",
                grid.worst, grid.passed ? "monotone, below bound" : grid.detail.c_str(), 100.0 * share, steps)};
}

// ---------------------------------------------------------------------------

GaussianMixture mixture(std::vector<std::pair<double, Vec4>> terms, double var) {
    GaussianMixture gm;
    for (const auto& [w, m] : terms) gm.components.push_back({w, m, var * Mat4::Identity()});
    return gm;
}

Outcome poisson_round_trips() {
    Rng rng{5};
    double worst_lambda = 0.0, worst_weight = 0.0;
    const std::vector<Region> cutters{Region::rect(0, kInf, -kInf, kInf), Region::disc(10, 5, 20),
                                      region_difference(Region::rect(-30, 30, -30, 30), Region::disc(0, 0, 8))};
    std::uniform_real_distribution<double> u(-25.0, 25.0);
    for (int c = 0; c < 30; ++c) {
        GaussianMixture gm;
        for (int j = 0; j < 4; ++j) {
            Mat4 p = (25.0 + 10.0 * j) * Mat4::Identity();
            p(0, 1) = p(1, 0) = 5.0 * (j - 1.5);
            gm.components.push_back({0.1 + 0.2 * j, Vec4(u(rng), u(rng), 1, -1), p});
        }
        const double lambda = 0.5 + 0.1 * c;
        const auto domain = c % 2 ? Region::all() : Region::rect(-60, 60, -50, 70);
        const auto post = make_posterior(lambda, gm, domain, rng);
        const auto [in, out] = split(post, cutters[c % cutters.size()], rng);
        const auto back = disjoint_union(in, out);
        worst_lambda = std::max(worst_lambda, std::abs(back.lambda - post.lambda));
        for (const auto& orig : post.components) {
            double total = 0.0;
            for (const auto& t : back.components)
                if (t.gaussian.mean == orig.gaussian.mean) total += t.gaussian.weight;
            worst_weight = std::max(worst_weight, std::abs(total - orig.gaussian.weight));
        }
    }

    double worst_restrict = 0.0;
    const auto interior = make_posterior(3.0, mixture({{1.0, Vec4(0, 0, 0, 0)}}, 1.0));
    for (const auto& region : {Region::rect(-8, 8, -8, 8), Region::disc(0, 0, 8.0 * std::sqrt(2.0)),
                               region_intersect(Region::disc(0, 0, 20), Region::rect(-8, 8, -8, 8))}) {
        const auto r = restrict(interior, region, rng, 10000);
        worst_restrict = std::max(worst_restrict, std::abs(r.lambda - 3.0) / 3.0);
    }
    const bool ok = worst_lambda <= 1e-12 && worst_weight <= 1e-12 && worst_restrict < 1e-6;
    return {ok, fmt("split/union lambda err %.2g, weight err %.2g over 30 cases; interior restrict rel change %.2g",
                    worst_lambda, worst_weight, worst_restrict)};
}

// ---------------------------------------------------------------------------

Outcome gci_closed_forms() {
    Rng rng{6};
    double worst_mean = 0.0, worst_cov = 0.0;
    std::normal_distribution<double> n;
    for (int c = 0; c < 20; ++c) {
        Mat4 a;
        for (int k = 0; k < 16; ++k) a.data()[k] = n(rng);
        const Mat4 p = a * a.transpose() + 4.0 * Mat4::Identity();
        const Vec4 ma(n(rng), n(rng), n(rng), n(rng));
        const Vec4 mb = ma + Vec4(n(rng), n(rng), n(rng), n(rng));
        const auto pa = make_posterior(1.0, GaussianMixture{{{1.0, ma, p}}});
        const auto pb = make_posterior(2.0, GaussianMixture{{{1.0, mb, p}}});
        const auto f = gci_fuse_common(pa, pb, {}, Region::all(), rng);
        worst_mean = std::max(worst_mean, (f.components.at(0).gaussian.mean - 0.5 * (ma + mb)).norm());
        worst_cov = std::max(worst_cov, (f.components.at(0).gaussian.cov - p).norm() / p.norm());
    }

    // Identical location on a disc: the fused lambda is sqrt(la lb) times a K estimated by MC.
    const double la = 1.0, lb = 4.0, sigma = 10.0, radius = 20.0;
    const auto disc = Region::disc(0, 0, radius);
    const auto loc = mixture({{1.0, Vec4(0, 0, 0, 0)}}, sigma * sigma);
    const auto a = make_posterior(la, loc, disc, rng);
    const auto b = make_posterior(lb, loc, disc, rng);
    const auto fused = gci_fuse_common(a, b, {}, disc, rng);
    const double c = 1.0 - std::exp(-radius * radius / (2.0 * sigma * sigma));
    const double m = kDefaultMassSamples;
    // Three independent mass estimates enter K: the fused one and half-powers of the two inputs.
    const double rel_se = std::sqrt((1.0 - c) / (c * m)) * std::sqrt(1.0 + 0.25 + 0.25);
    const double target = std::sqrt(la * lb);
    const double se = target * rel_se;
    const double gap = std::abs(fused.lambda - target);

    const auto box = Region::rect(-200, 200, -200, 200);
    const auto exact = gci_fuse_common(make_posterior(la, loc, box, rng), make_posterior(lb, loc, box, rng), {}, box, rng);
    const double exact_gap = std::abs(exact.lambda - target);

    const bool ok = worst_mean <= 1e-9 && worst_cov <= 1e-9 && gap <= 3.0 * se && exact_gap <= 1e-12;
    return {ok, fmt("mean err %.2g, cov rel err %.2g; MC lambda %.6f vs %.1f (|d| = %.2g, 3 se = %.2g); "
                    "exact-path |d| = %.2g",
                    worst_mean, worst_cov, fused.lambda, target, gap, 3.0 * se, exact_gap)};
}

// ---------------------------------------------------------------------------

Outcome bird_identities() {
    Rng rng{7};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_sum = 0.0, worst_point = 0.0, worst_same = 0.0;
    for (int c = 0; c < 20; ++c) {
        const auto fa = c % 2 ? Region::rect(0, 100, 0, 100)
                              : region_union(Region::rect(0, 100, 0, 100), Region::disc(-20, 50, 30));
        const auto fb = c % 3 ? Region::rect(120, 220, 0, 100) : Region::disc(170, 50, 45);
        const auto a = make_posterior(0.5 + u(rng), mixture({{0.6, Vec4(20 + 20 * u(rng), 50, 0, 0)},
                                                             {0.4, Vec4(80, 20 + 40 * u(rng), 1, 0)}},
                                                            100.0),
                                      fa, rng);
        const auto b = make_posterior(0.5 + u(rng), mixture({{1.0, Vec4(160 + 20 * u(rng), 50, 0, 0)}}, 225.0), fb, rng);
        const auto out = bird_fuse_pair({a, fa}, {b, fb}, FusionWeights::from_a(u(rng)), rng);
        worst_sum = std::max(worst_sum, std::abs(out.posterior.lambda - (a.lambda + b.lambda)));
        for (int s = 0; s < 500; ++s) {
            const Vec4 x(-60 + 300 * u(rng), -20 + 140 * u(rng), 2 * u(rng) - 1, 2 * u(rng) - 1);
            const double expected = contains_state(fa, x)   ? poisson_intensity(a, x)
                                    : contains_state(fb, x) ? poisson_intensity(b, x)
                                                            : 0.0;
            const double got = poisson_intensity(out.posterior, x);
            worst_point = std::max(worst_point, std::abs(got - expected) / std::max(expected, 1e-300));
            if (expected == 0.0 && got != 0.0) worst_point = kInf;
        }
    }
    for (int c = 0; c < 20; ++c) {
        const auto fov = Region::rect(-50, 50 + 50 * u(rng), -60, 60);
        const auto a = make_posterior(1.0 + u(rng), mixture({{0.5, Vec4(-20, 10 * u(rng), 0, 0)},
                                                             {0.5, Vec4(30, -10, 0, 1)}}, 80.0), fov, rng);
        const auto b = make_posterior(1.0 + u(rng), mixture({{1.0, Vec4(-15, 0, 0, 0)}}, 150.0), fov, rng);
        const auto w = FusionWeights::from_a(0.2 + 0.6 * u(rng));
        Rng r1{static_cast<std::uint64_t>(c)}, r2{static_cast<std::uint64_t>(c)};
        const auto bird = bird_fuse_pair({a, fov}, {b, fov}, w, r1);
        const auto gci = gci_fuse_common(a, b, w, fov, r2);
        for (int s = 0; s < 500; ++s) {
            const Vec4 x(-60 + 170 * u(rng), -70 + 140 * u(rng), 2 * u(rng) - 1, 2 * u(rng) - 1);
            const double g = poisson_intensity(gci, x);
            const double f = poisson_intensity(bird.posterior, x);
            worst_same = std::max(worst_same, std::abs(f - g) / std::max(g, 1e-300));
        }
    }
    const bool ok = worst_sum == 0.0 && worst_point <= 1e-12 && worst_same <= 1e-9;
    return {ok, fmt("disjoint FoVs: lambda err %.2g, pointwise rel err %.2g; identical FoVs vs GCI: rel err %.2g",
                    worst_sum, worst_point, worst_same)};
}

// ---------------------------------------------------------------------------

double brute_force_ospa(const std::vector<Vec2>& x, const std::vector<Vec2>& y, double c, double p) {
    const auto& s = x.size() <= y.size() ? x : y;
    const auto& l = x.size() <= y.size() ? y : x;
    if (l.empty()) return 0.0;
    std::vector<int> perm(l.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = kInf;
    do {
        double sum = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) sum += std::pow(std::min((s[i] - l[perm[i]]).norm(), c), p);
        best = std::min(best, sum);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double n = static_cast<double>(l.size());
    return std::pow((best + std::pow(c, p) * (n - static_cast<double>(s.size()))) / n, 1.0 / p);
}

Outcome ospa_oracle() {
    Rng rng{8};
    std::uniform_int_distribution<int> size(0, 4);
    std::uniform_real_distribution<double> pos(0.0, 250.0);
    std::uniform_real_distribution<double> order(1.0, 3.0);
    double worst = 0.0;
    for (int c = 0; c < 500; ++c) {
        std::vector<Vec2> x(size(rng)), y(size(rng));
        for (auto& v : x) v = Vec2(pos(rng), pos(rng));
        for (auto& v : y) v = Vec2(pos(rng), pos(rng));
        const double p = c % 3 == 0 ? 2.0 : order(rng);
        const double cut = c % 2 ? 100.0 : 60.0;
        const double got = ospa(x, y, cut, p).total;
        worst = std::max(worst, std::abs(got - brute_force_ospa(x, y, cut, p)));
    }
    return {worst <= 1e-12, fmt("500 cases, worst |difference| %.2g", worst)};
}

// ---------------------------------------------------------------------------

std::vector<LocalPosterior> initial_states(const std::vector<Region>& fovs, Rng& rng) {
    std::vector<LocalPosterior> states;
    for (const auto& f : fovs) {
        const auto box = f.bounding_box().value();
        const Vec4 m(0.5 * (box.xmin + box.xmax), 0.5 * (box.ymin + box.ymax), 0, 0);
        states.push_back({make_posterior(1.0, mixture({{1.0, m}}, 400.0), f, rng), f});
    }
    return states;
}

Outcome consensus_coverage() {
    const auto paper = paper_scenario();
    std::vector<Region> square_fovs;
    for (const auto& s : paper.sensors) square_fovs.push_back(s.fov);
    std::vector<Region> round_fovs{Region::disc(300, 300, 400), Region::rect(500, 1300, 0, 700),
                                   Region::disc(1500, 700, 500), region_difference(Region::rect(800, 1800, 1000, 1900),
                                                                                   Region::disc(1300, 1450, 150)),
                                   Region::rect(0, 900, 1100, 2000)};
    struct Topology {
        std::string name;
        NetworkGraph graph;
        const std::vector<Region>* fovs;
    };
    const std::vector<Topology> cases{{"ring", NetworkGraph::ring(5), &square_fovs},
                                      {"bidirectional ring", NetworkGraph::ring(5, true), &round_fovs},
                                      {"scenario graph", paper.network, &square_fovs},
                                      {"scenario graph, curved FoVs", paper.network, &round_fovs}};
    Rng rng{9};
    std::uniform_real_distribution<double> u(-300.0, 2300.0);
    long mismatches = 0, samples = 0;
    std::string detail;
    for (const auto& t : cases) {
        const int diameter = graph_diameter(t.graph);
        Region global = Region::empty();
        for (const auto& f : *t.fovs) global = region_union(global, f);
        const auto out = run_consensus(initial_states(*t.fovs, rng), t.graph, diameter, {}, 99);
        long local = 0;
        for (int s = 0; s < 10000; ++s) {
            const Vec2 p(u(rng), u(rng));
            for (const auto& node : out) local += node.fov.contains(p) != global.contains(p);
        }
        mismatches += local;
        samples += 10000;
        detail += fmt("%s (L = %d): %ld; ", t.name.c_str(), diameter, local);
    }
    return {mismatches == 0, detail + fmt("%ld points per topology", samples / static_cast<long>(cases.size()))};
}

// ---------------------------------------------------------------------------

struct CsvRow {
    std::string mode;
    int node = 0;
    int step = 0;
    double ospa = 0.0;
    double card_est = 0.0;
    double card_true = 0.0;
};

std::vector<CsvRow> read_ospa_csv(const fs::path& path) {
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    std::vector<CsvRow> rows;
    while (std::getline(is, line)) {
        std::stringstream ss(line);
        std::string f[9];
        for (auto& cell : f) std::getline(ss, cell, ',');
        rows.push_back({f[0], std::stoi(f[2]), std::stoi(f[3]), std::stod(f[4]), std::stod(f[7]), std::stod(f[8])});
    }
    return rows;
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

struct SceneRun {
    int status = -1;
    double seconds = 0.0;
    fs::path dir;
};

SceneRun run_cli(const std::string& cli, const fs::path& dir) {
    fs::remove_all(dir);
    const std::string cmd = "\"" + cli + "\" run --scenario paper-fig6 --mode m1,m2,m3 --runs 100 --seed 42 " +
                            "--consensus-steps 3 --no-tracks --out \"" + dir.string() + "\" > \"" +
                            (dir.string() + ".log") + "\" 2>&1";
    const auto t0 = std::chrono::steady_clock::now();
    const int status = std::system(cmd.c_str());
    return {status, seconds_since(t0), dir};
}

SceneRun first_run;

Outcome reproduction(const std::string& cli, const fs::path& work) {
    first_run = run_cli(cli, work / "run1");
    if (first_run.status != 0) return {false, fmt("bird run exited with status %d", first_run.status)};
    const auto rows = read_ospa_csv(first_run.dir / "ospa.csv");
    const auto cfg = paper_scenario();
    const int start = cfg.steady_state_start;

    // Nodes whose FoV misses at least one live object at some step.
    Rng truth_rng{0};
    const auto truth = generate_truth(cfg, truth_rng);
    std::map<int, bool> excludes;
    for (const auto& s : cfg.sensors) {
        bool miss = false;
        for (const auto& step : truth)
            for (const auto& x : step.state) miss = miss || !s.fov.contains(position_of(x));
        excludes[s.id] = miss;
    }

    std::map<std::pair<std::string, int>, double> ospa_sum, bias_sum, bias_max;
    std::map<std::pair<std::string, int>, int> count;
    for (const auto& r : rows) {
        if (r.step < start) continue;
        const auto key = std::make_pair(r.mode, r.node);
        ospa_sum[key] += r.ospa;
        bias_sum[key] += std::abs(r.card_est - r.card_true);
        bias_max[key] = std::max(bias_max[key], std::abs(r.card_est - r.card_true));
        ++count[key];
    }
    auto mean = [&](const std::string& m, int n) { return ospa_sum[{m, n}] / count[{m, n}]; };

    bool order_ok = true, margin_ok = true, gap_ok = true, card_ok = true;
    double worst_gap = 0.0, min_margin = kInf, worst_card = 0.0, m1_dev = 0.0;
    std::string table;
    for (const auto& s : cfg.sensors) {
        const double m1 = mean("m1", s.id), m2 = mean("m2", s.id), m3 = mean("m3", s.id);
        order_ok = order_ok && m3 <= m2 && m2 <= m1;
        if (excludes[s.id]) {
            min_margin = std::min(min_margin, m1 / m2 - 1.0);
            margin_ok = margin_ok && m1 >= 1.25 * m2;
        }
        const double gap = std::abs(m2 - m3) / m3;
        worst_gap = std::max(worst_gap, gap);
        gap_ok = gap_ok && gap <= 0.20;
        for (const char* m : {"m2", "m3"}) {
            const double e = bias_sum[{m, s.id}] / count[{m, s.id}];
            worst_card = std::max(worst_card, e);
            card_ok = card_ok && e <= 0.5;
        }
        m1_dev = std::max(m1_dev, bias_max[{"m1", s.id}]);
        table += fmt("n%d %.1f/%.1f/%.1f ", s.id, m1, m2, m3);
    }
    const bool m1_ok = m1_dev >= 1.0;
    const bool time_ok = first_run.seconds < 600.0;
    const bool ok = order_ok && margin_ok && gap_ok && card_ok && m1_ok && time_ok;
    return {ok, fmt("(a) order %s, min M1 excess %.0f%%; (b) max M2-M3 gap %.1f%%; (c) M2/M3 mean |card bias| "
                    "max %.2f, M1 max |bias| %.2f; runtime %.0f s. steady OSPA m1/m2/m3: ",
                    order_ok ? "ok" : "VIOLATED", 100.0 * min_margin, 100.0 * worst_gap, worst_card, m1_dev,
                    first_run.seconds) +
                    table};
}

Outcome determinism(const std::string& cli, const fs::path& work) {
    if (first_run.status != 0) {
        first_run = run_cli(cli, work / "run1");
        if (first_run.status != 0) return {false, fmt("first bird run exited with status %d", first_run.status)};
    }
    const auto second = run_cli(cli, work / "run2");
    if (second.status != 0) return {false, fmt("second bird run exited with status %d", second.status)};
    const auto a = slurp(first_run.dir / "ospa.csv");
    const auto b = slurp(second.dir / "ospa.csv");
    return {!a.empty() && a == b, fmt("ospa.csv %zu bytes, %s (fnv1a %s vs %s)", a.size(),
                                      a == b ? "identical" : "DIFFERENT", io::fnv1a_hex(a).c_str(),
                                      io::fnv1a_hex(b).c_str())};
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
    fs::path work = fs::temp_directory_path() / "bird_acceptance";
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        if (key == "--cli") cli = argv[i + 1];
        if (key == "--work") work = argv[i + 1];
    }
    fs::create_directories(work);

    report(1, "uninformative density is invariant under Bayes and power operators",
           [] { return timed_oracle(oracle::check_invariance, 200, 200, 10.0); });
    report(2, "marginal times conditional reconstructs the density",
           [] { return timed_oracle(oracle::check_reconstruction, 200, 200, 10.0); });
    report(3, "BIRD with explicit uninformative factors equals the reduced form",
           [] { return timed_oracle(oracle::check_dual_path, 150, 100, 30.0); });
    report(4, "standard GCI loses objects outside the common FoV", pathology);
    report(5, "Poisson split, union and restrict round trips", poisson_round_trips);
    report(6, "GCI closed forms for Gaussian posteriors", gci_closed_forms);
    report(7, "BIRD structural identities", bird_identities);
    report(8, "OSPA equals exhaustive assignment", ospa_oracle);
    report(9, "consensus spreads the global FoV to every node", consensus_coverage);
    if (cli.empty()) {
        report(10, "reconstruction scenario ordering", [] { return Outcome{false, "no --cli given"}; });
        report(11, "same seed gives identical ospa.csv", [] { return Outcome{false, "no --cli given"}; });
    } else {
        report(10, "reconstruction scenario ordering M3 <= M2 <= M1", [&] { return reproduction(cli, work); });
        report(11, "same seed gives byte-identical ospa.csv", [&] { return determinism(cli, work); });
    }
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
