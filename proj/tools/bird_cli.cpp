#include "bird/io.hpp"
#include "bird/oracle_checks.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

constexpr int kUsageError = 2;

struct RunFlags {
    std::string scenario = "paper-fig6";
    std::string modes = "m1,m2,m3";
    std::string form;
    std::string fusion;
    int consensus_steps = -1;
    int runs = -1;
    std::uint64_t seed = 0;
    std::string out = "results";
    bool tracks = true;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool looks_like_path(const std::string& s) {
    return s.find('/') != std::string::npos || s.find('\\') != std::string::npos ||
           (s.size() > 5 && s.substr(s.size() - 5) == ".json");
}

int cmd_run(const RunFlags& f) {
    bird::ScenarioConfig cfg;
    try {
        if (fs::exists(f.scenario) && !fs::is_directory(f.scenario)) {
            cfg = bird::io::load_scenario(f.scenario);
        } else if (auto builtin = bird::builtin_scenario(f.scenario); builtin && !looks_like_path(f.scenario)) {
            cfg = *builtin;
        } else {
            std::cerr << "error: scenario file not found: " << f.scenario << '\n';
            return kUsageError;
        }
        if (!f.form.empty()) cfg.form = bird::parse_form(f.form);
        if (!f.fusion.empty()) cfg.fusion = bird::parse_fusion(f.fusion);
        if (f.consensus_steps >= 0) cfg.consensus_steps = f.consensus_steps;
        if (f.runs >= 0) cfg.runs = f.runs;
        cfg.seed = f.seed;

        std::vector<bird::Mode> modes;
        for (const auto& m : split_list(f.modes)) modes.push_back(bird::parse_mode(m));
        if (modes.empty()) throw bird::ConfigError("mode: no mode given");
        for (const auto m : modes) {
            cfg.mode = m;
            cfg.validate();
        }
        cfg.mode = modes.front();

        fs::create_directories(f.out);
        const int threads = bird::threads_from_env();
        std::vector<bird::Aggregate> aggregates;
        std::vector<bird::TrialResult> all_trials;
        for (const auto m : modes) {
            std::vector<bird::TrialResult> trials;
            aggregates.push_back(bird::monte_carlo(cfg, m, cfg.form, cfg.runs, threads, f.tracks ? &trials : nullptr));
            for (auto& t : trials) all_trials.push_back(std::move(t));
        }

        {
            std::ofstream os(fs::path(f.out) / "ospa.csv", std::ios::binary);
            bird::io::write_ospa_csv(os, aggregates);
        }
        if (f.tracks) {
            std::ofstream os(fs::path(f.out) / "tracks.json", std::ios::binary);
            bird::io::write_tracks_json(os, all_trials);
        }
        {
            std::ofstream os(fs::path(f.out) / "summary.json", std::ios::binary);
            bird::io::write_summary_json(os, cfg, aggregates, BIRD_GIT_DESCRIBE);
        }

        std::printf("scenario %s  form %s  runs %d  seed %llu\n", cfg.name.c_str(), bird::to_string(cfg.form).c_str(),
                    cfg.runs, static_cast<unsigned long long>(cfg.seed));
        std::printf("steady-state mean OSPA (steps >= %d)\n", cfg.steady_state_start);
        std::printf("%-6s", "node");
        for (const auto& a : aggregates) std::printf("%10s", bird::to_string(a.mode).c_str());
        std::printf("\n");
        for (std::size_t n = 0; n < aggregates.front().node_ids.size(); ++n) {
            std::printf("%-6d", aggregates.front().node_ids[n]);
            for (const auto& a : aggregates) std::printf("%10.2f", a.steady_ospa(n, cfg.steady_state_start));
            std::printf("\n");
        }
        std::printf("wrote %s\n", f.out.c_str());
    } catch (const bird::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const bird::PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return 0;
}

int cmd_oracle_check(const bird::oracle::CheckOptions& opts) {
    std::vector<bird::oracle::CheckResult> results;
    try {
        results = bird::oracle::run_oracle_checks(opts);
    } catch (const bird::PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    bool ok = true;
    for (const auto& r : results) {
        std::printf("%s  %-52s cases %-4d worst %.3g (tol %.3g)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.cases, r.worst, r.tolerance);
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

int cmd_ospa(const std::string& a, const std::string& b, double c, double p) {
    try {
        const auto x = bird::io::read_points(a);
        const auto y = bird::io::read_points(b);
        const auto r = bird::ospa(x, y, c, p);
        std::printf("%.10g %.10g %.10g\n", r.total, r.localization, r.cardinality);
    } catch (const bird::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const bird::PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-sensor multi-object tracking with BIRD fusion"};
    app.require_subcommand(1);

    RunFlags run;
    auto* run_cmd = app.add_subcommand("run", "Run Monte Carlo trials of a scenario");
    run_cmd->add_option("--scenario", run.scenario, "Built-in scenario name or path to a JSON scenario")
        ->capture_default_str();
    run_cmd->add_option("--mode", run.modes, "Comma-separated modes: m1, m2, m3")->capture_default_str();
    run_cmd->add_option("--form", run.form, "Posterior form: 1, 2 or 3");
    run_cmd->add_option("--fusion", run.fusion, "Fusion rule: bird or gci");
    run_cmd->add_option("--consensus-steps", run.consensus_steps, "Consensus rounds per step (L)");
    run_cmd->add_option("--runs", run.runs, "Monte Carlo trials");
    run_cmd->add_option("--seed", run.seed, "Master seed")->required();
    run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
    run_cmd->add_flag("!--no-tracks", run.tracks, "Skip the per-trial tracks.json dump");

    bird::oracle::CheckOptions oracle_opts;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "Exact finite-grid checks of the set calculus");
    oracle_cmd->add_option("--cells", oracle_opts.cells, "Largest grid size")->capture_default_str();
    oracle_cmd->add_option("--n-max", oracle_opts.n_max, "Largest cardinality cap")->capture_default_str();
    oracle_cmd->add_option("--cases", oracle_opts.cases, "Random cases per check")->capture_default_str();
    oracle_cmd->add_option("--seed", oracle_opts.seed, "Seed")->capture_default_str();

    std::string scenario_name;
    auto* scenario_cmd = app.add_subcommand("scenario", "Print a built-in scenario as JSON");
    scenario_cmd->add_option("name", scenario_name, "paper-fig6 or two-agent")->required();

    std::string file_a, file_b;
    double cutoff = 100.0, order = 2.0;
    auto* ospa_cmd = app.add_subcommand("ospa", "OSPA distance between two point files ('x y' per line)");
    ospa_cmd->add_option("a", file_a, "First point file")->required();
    ospa_cmd->add_option("b", file_b, "Second point file")->required();
    ospa_cmd->add_option("-c,--cutoff", cutoff, "Cutoff c")->capture_default_str();
    ospa_cmd->add_option("-p,--order", order, "Order p")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    if (*run_cmd) return cmd_run(run);
    if (*oracle_cmd) return cmd_oracle_check(oracle_opts);
    if (*ospa_cmd) return cmd_ospa(file_a, file_b, cutoff, order);
    if (*scenario_cmd) {
        const auto cfg = bird::builtin_scenario(scenario_name);
        if (!cfg) {
            std::cerr << "error: unknown scenario: " << scenario_name << '\n';
            return kUsageError;
        }
        std::cout << bird::io::scenario_to_json(*cfg) << '\n';
        return 0;
    }
    return kUsageError;
}
