#include "bird/oracle_checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

namespace bird::oracle {

namespace {

constexpr double kExact = 1e-12;

struct Draw {
    int cells;
    int n_max;
    double volume;
};

Draw draw_grid(const CheckOptions& opts, Rng& rng, int min_cells = 1) {
    std::uniform_int_distribution<int> cells(std::min(min_cells, opts.cells), opts.cells);
    const int n = cells(rng);
    std::uniform_int_distribution<int> cap(0, std::min(opts.n_max, n));
    std::uniform_real_distribution<double> vol(0.2, 2.0);
    const int n_max = cap(rng);
    return {n, n_max, vol(rng)};
}

void validate(const CheckOptions& opts) {
    if (opts.cells < 1 || opts.cells > kMaxCells) {
        throw PreconditionError("cells must be between 1 and " + std::to_string(kMaxCells));
    }
    if (opts.n_max < 0 || opts.n_max > 4) throw PreconditionError("n_max must be between 0 and 4");
    if (opts.cases < 1) throw PreconditionError("cases must be positive");
}

CheckResult finish(std::string name, int cases, double worst, double tol) {
    CheckResult r;
    r.name = std::move(name);
    r.cases = cases;
    r.worst = worst;
    r.tolerance = tol;
    r.passed = worst <= tol;
    return r;
}

} // namespace

FiniteRfsDensity random_density(int cells, double cell_volume, int n_max, Rng& rng, double zero_fraction) {
    FiniteRfsDensity d(cells, cell_volume, n_max);
    std::uniform_real_distribution<double> value(0.05, 1.0);
    std::bernoulli_distribution zero(zero_fraction);
    for (Subset x = 0; x < d.table_size(); ++x) {
        if (!d.admissible(x)) continue;
        const double v = value(rng);
        if (x != 0 && zero(rng)) continue;
        d.set(x, v);
    }
    return normalized(d);
}

FiniteRfsDensity independent_cells(const std::vector<double>& q, double cell_volume) {
    const int n = static_cast<int>(q.size());
    FiniteRfsDensity d(n, cell_volume, n);
    for (Subset x = 0; x <= d.full(); ++x) {
        double v = 1.0;
        for (int i = 0; i < n; ++i) v *= (x >> i & 1U) ? q[i] / cell_volume : 1.0 - q[i];
        d.set(x, v);
    }
    return d;
}

CheckResult check_invariance(const CheckOptions& opts) {
    validate(opts);
    Rng rng = make_stream(opts.seed, {1});
    std::uniform_real_distribution<double> omega(0.05, 1.0);
    double worst = 0.0;
    for (int c = 0; c < opts.cases; ++c) {
        const Draw g = draw_grid(opts, rng);
        const auto d = random_density(g.cells, g.volume, g.n_max, rng);
        const auto ui = uninformative_exact(g.cells, g.volume, g.n_max);
        worst = std::max(worst, max_abs_diff(bayes_op(d, ui), d));
        worst = std::max(worst, max_abs_diff(power_op(ui, omega(rng)), ui));
    }
    return finish("uninformative invariance", opts.cases, worst, kExact);
}

CheckResult check_reconstruction(const CheckOptions& opts) {
    validate(opts);
    Rng rng = make_stream(opts.seed, {2});
    double worst = 0.0;
    for (int c = 0; c < opts.cases; ++c) {
        const Draw g = draw_grid(opts, rng);
        const auto d = random_density(g.cells, g.volume, g.n_max, rng);
        std::uniform_int_distribution<Subset> pick(0, d.full());
        const Subset w = pick(rng);
        const Subset v = d.full() & ~w;
        const auto m = marginalize(d, w);
        for (Subset x = 0; x <= d.full(); ++x) {
            const Subset xw = x & w;
            const auto cond = condition(d, w, xw);
            const double rebuilt = m(xw) * cond(x & v);
            // Where the marginal vanishes the density does too; the conditional is the constant one.
            worst = std::max(worst, std::abs(rebuilt - d(x)));
        }
    }
    return finish("marginal-conditional reconstruction", opts.cases, worst, kExact);
}

CheckResult check_dual_path(const CheckOptions& opts) {
    validate(opts);
    Rng rng = make_stream(opts.seed, {3});
    std::uniform_real_distribution<double> omega(0.05, 0.95);
    double worst = 0.0;
    int done = 0;
    int degenerate = 0;
    while (done < opts.cases) {
        const Draw g = draw_grid(opts, rng, 2);
        const auto a = random_density(g.cells, g.volume, g.n_max, rng);
        const auto b = random_density(g.cells, g.volume, g.n_max, rng);
        std::uniform_int_distribution<Subset> pick(1, a.full());
        const Subset fa = pick(rng);
        const Subset fb = pick(rng);
        const double w = omega(rng);
        try {
            const auto explicit_path = bird_fuse_exact(a, fa, b, fb, w, BirdPath::Explicit);
            const auto reduced_path = bird_fuse_exact(a, fa, b, fb, w, BirdPath::Reduced);
            worst = std::max(worst, max_abs_diff(explicit_path, reduced_path));
            ++done;
        } catch (const DegenerateInput&) {
            if (++degenerate > 10 * opts.cases) throw;
        }
    }
    auto r = finish("explicit vs reduced BIRD", done, worst, kExact);
    r.detail = std::to_string(degenerate) + " degenerate draws skipped";
    return r;
}

CheckResult check_gci_pathology(const CheckOptions& opts) {
    validate(opts);
    // Cells: 0 only in a's FoV, 1 common, 2 only in b's FoV.
    constexpr Subset outside_common = 0b101;
    const std::array<double, 3> eps_values{1e-3, 1e-4, 1e-6};
    const std::array<std::pair<double, double>, 3> weights{{{0.5, 0.5}, {0.3, 0.7}, {0.7, 0.3}}};
    double worst_ratio = 0.0;
    bool monotone = true;
    std::ostringstream detail;
    for (const auto& [wa, wb] : weights) {
        double previous = 2.0;
        for (const double eps : eps_values) {
            const auto a = independent_cells({0.9, 0.5, eps}, 1.0);
            const auto b = independent_cells({eps, 0.5, 0.9}, 1.0);
            const std::pair<FiniteRfsDensity, double> parts[] = {{a, wa}, {b, wb}};
            const double yes = yes_probability(gci_fuse_exact(parts), outside_common);
            const double bound = 10.0 * std::pow(eps, std::min(wa, wb));
            worst_ratio = std::max(worst_ratio, yes / bound);
            monotone = monotone && yes < previous;
            previous = yes;
            detail << "w=" << wa << " eps=" << eps << " yes=" << yes << "; ";
        }
    }
    auto r = finish("standard GCI loses objects outside the common FoV",
                    static_cast<int>(eps_values.size() * weights.size()), worst_ratio, 1.0);
    r.passed = r.passed && monotone;
    r.detail = detail.str() + (monotone ? "monotone" : "NOT monotone");
    return r;
}

std::vector<CheckResult> run_oracle_checks(const CheckOptions& opts) {
    return {check_invariance(opts), check_reconstruction(opts), check_dual_path(opts), check_gci_pathology(opts)};
}

} // namespace bird::oracle
