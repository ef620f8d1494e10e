#include "doctest.h"

#include <bird/oracle.hpp>
#include <bird/oracle_checks.hpp>
#include <bird/rng.hpp>

#include <cmath>
#include <vector>

using namespace bird;
using namespace bird::oracle;

namespace {

/// Grid Poisson density: pi(X) = exp(-lambda) prod_{x in X} lambda p(x), n_max = cells.
FiniteRfsDensity grid_poisson(double lambda, const std::vector<double>& p, double v) {
    int n = static_cast<int>(p.size());
    FiniteRfsDensity d(n, v, n);
    for (Subset x = 0; x <= d.full(); ++x) {
        double val = 1.0;
        for (int i = 0; i < n; ++i)
            if (x >> i & 1) val *= lambda * p[i];
        d.set(x, val);
    }
    return normalized(d);
}

} // namespace

TEST_CASE("set integral of simple densities") {
    FiniteRfsDensity d(3, 1.0, 2);
    d.set(0, 1.0);
    CHECK(set_integral(d) == 1.0);
    CHECK(set_integral(uninformative_exact(2, 1.0, 2)) == doctest::Approx(1.0).epsilon(1e-15));
    Rng rng{1};
    for (int i = 0; i < 20; ++i)
        CHECK(set_integral(random_density(6, 0.5, 3, rng)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("table setters validate their input") {
    FiniteRfsDensity d(3, 1.0, 1);
    CHECK_THROWS_AS(d.set(1, -0.1), PreconditionError);
    CHECK_THROWS_AS(d.set(0b011, 0.5), PreconditionError);
    CHECK_NOTHROW(d.set(0b011, 0.0));
    CHECK_THROWS(FiniteRfsDensity(13, 1.0, 2));
}

TEST_CASE("uninformative density on one cell") {
    auto u = uninformative_exact(1, 1.0, 1);
    CHECK(u(0) == 0.5);
    CHECK(u(1) == 0.5);
}

TEST_CASE("Bayesian operator") {
    Rng rng{2};
    auto a = random_density(5, 1.0, 3, rng);
    CHECK(max_abs_diff(bayes_op(a, uninformative_exact(5, 1.0, 3)), a) < 1e-12);
    FiniteRfsDensity p(3, 1.0, 3), q(3, 1.0, 3);
    p.set(0b001, 1.0);
    q.set(0b010, 1.0);
    CHECK_THROWS_AS(bayes_op(p, q), DegenerateInput);
    auto pp = bayes_op(normalized(p), normalized(p));
    CHECK(pp(0b001) == 1.0);
}

TEST_CASE("power operator") {
    Rng rng{3};
    auto a = random_density(4, 1.0, 2, rng);
    CHECK(max_abs_diff(power_op(a, 1.0), a) < 1e-15);
    auto u = uninformative_exact(6, 0.7, 3);
    CHECK(max_abs_diff(power_op(u, 0.37), u) < 1e-12);
    FiniteRfsDensity two(1, 1.0, 1);
    two.set(0, 0.64);
    two.set(1, 0.36);
    auto h = power_op(two, 0.5);
    CHECK(h(0) / h(1) == doctest::Approx(0.8 / 0.6).epsilon(1e-14));
}

TEST_CASE("exact GCI fusion") {
    Rng rng{4};
    auto a = random_density(4, 1.0, 2, rng);
    std::vector<std::pair<FiniteRfsDensity, double>> same{{a, 0.5}, {a, 0.5}};
    CHECK(max_abs_diff(gci_fuse_exact(same), a) < 1e-12);
    auto b = random_density(4, 1.0, 2, rng);
    std::vector<std::pair<FiniteRfsDensity, double>> pass{{a, 1.0}, {b, 0.0}};
    CHECK(max_abs_diff(gci_fuse_exact(pass), a) < 1e-15);
}

TEST_CASE("exact GCI of grid Poisson densities follows the Poisson formula") {
    std::vector<double> pa{0.5, 0.3, 0.2}, pb{0.2, 0.2, 0.6};
    double la = 1.5, lb = 0.8, wa = 0.4, wb = 0.6;
    auto a = grid_poisson(la, pa, 1.0);
    auto b = grid_poisson(lb, pb, 1.0);
    std::vector<std::pair<FiniteRfsDensity, double>> in{{a, wa}, {b, wb}};
    auto fused = gci_fuse_exact(in);
    double k = 0.0;
    std::vector<double> pf(3);
    for (int i = 0; i < 3; ++i) k += pf[i] = std::pow(pa[i], wa) * std::pow(pb[i], wb);
    for (auto& x : pf) x /= k;
    double lf = std::pow(la, wa) * std::pow(lb, wb) * k;
    CHECK(max_abs_diff(fused, grid_poisson(lf, pf, 1.0)) < 1e-12);
}

TEST_CASE("marginals") {
    Rng rng{5};
    auto d = random_density(5, 1.0, 3, rng);
    CHECK(max_abs_diff(marginalize(d, d.full()), d) < 1e-15);
    auto none = marginalize(d, 0);
    CHECK(none(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(set_integral(none) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("marginal of a grid Poisson-shaped density keeps the restricted intensity") {
    std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    double lambda = 2.0;
    auto d = grid_poisson(lambda, p, 1.0);
    Subset w = 0b0110;
    double kw = p[1] + p[2];
    std::vector<double> pw{0.0, p[1] / kw, p[2] / kw, 0.0};
    CHECK(max_abs_diff(marginalize(d, w), grid_poisson(lambda * kw, pw, 1.0)) < 1e-12);
}

TEST_CASE("conditionals") {
    Rng rng{6};
    auto d = random_density(6, 1.0, 3, rng);
    Subset w = 0b000111;
    for (Subset given : {Subset{0}, Subset{0b001}, Subset{0b101}}) {
        auto c = condition(d, w, given);
        auto m = marginalize(d, w);
        for (Subset x = 0; x <= d.full(); ++x) {
            if (x & w) continue;
            if (!d.admissible(x | given)) continue;
            CHECK(c(x) * m(given) == doctest::Approx(d(x | given)).epsilon(1e-12));
        }
    }
}

TEST_CASE("conditional of an independent density does not depend on the given set") {
    auto d = independent_cells({0.2, 0.5, 0.7, 0.1}, 1.0);
    Subset w = 0b0011;
    auto c0 = condition(d, w, 0);
    auto c1 = condition(d, w, 0b01);
    auto c3 = condition(d, w, 0b11);
    CHECK(max_abs_diff(c0, c1) < 1e-12);
    CHECK(max_abs_diff(c0, c3) < 1e-12);
}

TEST_CASE("conditioning on an impossible set gives the constant one") {
    FiniteRfsDensity d(3, 1.0, 3);
    d.set(0, 0.5);
    d.set(0b100, 0.5);
    auto c = condition(d, 0b001, 0b001);
    for (Subset x = 0; x <= d.full(); ++x)
        if ((x & 0b001) == 0) CHECK(c(x) == 1.0);
}

TEST_CASE("BIRD on the grid") {
    Rng rng{7};
    auto a = random_density(6, 1.0, 3, rng);
    auto b = random_density(6, 1.0, 3, rng);
    Subset fa = 0b001111, fb = 0b111100;
    auto reduced = bird_fuse_exact(a, fa, b, fb, 0.4, BirdPath::Reduced);
    auto explicit_path = bird_fuse_exact(a, fa, b, fb, 0.4, BirdPath::Explicit);
    CHECK(max_abs_diff(reduced, explicit_path) < 1e-12);
    CHECK(set_integral(reduced) == doctest::Approx(1.0).epsilon(1e-12));

    Subset da = 0b000111, db = 0b111000;
    auto disjoint = bird_fuse_exact(a, da, b, db, 0.5);
    auto ma = marginalize(a, da);
    auto mb = marginalize(b, db);
    for (Subset x = 0; x <= a.full(); ++x) {
        if (!disjoint.admissible(x)) continue;
        CHECK(disjoint(x) == doctest::Approx(ma(x & da) * mb(x & db)).epsilon(1e-12));
    }
}

TEST_CASE("GCI loses objects outside the common FoV") {
    double eps = 1e-6;
    auto a = independent_cells({0.9, 0.5, eps}, 1.0);
    auto b = independent_cells({eps, 0.5, 0.9}, 1.0);
    std::vector<std::pair<FiniteRfsDensity, double>> in{{a, 0.5}, {b, 0.5}};
    auto fused = gci_fuse_exact(in);
    CHECK(yes_probability(fused, 0b101) < 10.0 * std::sqrt(eps));
    auto bird = bird_fuse_exact(a, 0b011, b, 0b110, 0.5);
    CHECK(yes_probability(bird, 0b001) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("GCI minimizes the weighted KL divergence") {
    FiniteRfsDensity a(2, 1.0, 1), b(2, 1.0, 1);
    a.set(0, 0.2);
    a.set(1, 0.5);
    a.set(2, 0.3);
    b.set(0, 0.6);
    b.set(1, 0.1);
    b.set(2, 0.3);
    double w = 0.35;
    std::vector<std::pair<FiniteRfsDensity, double>> in{{a, w}, {b, 1.0 - w}};
    auto fused = gci_fuse_exact(in);
    auto cost = [&](const FiniteRfsDensity& f) { return w * kl_divergence(f, a) + (1.0 - w) * kl_divergence(f, b); };
    double best = cost(fused);
    const int n = 200;
    for (int i = 1; i < n; ++i) {
        for (int j = 1; i + j < n; ++j) {
            FiniteRfsDensity f(2, 1.0, 1);
            f.set(0, 1.0 * (n - i - j) / n);
            f.set(1, 1.0 * i / n);
            f.set(2, 1.0 * j / n);
            CHECK(cost(f) >= best - 1e-12);
        }
    }
}

TEST_CASE("fused empty probability tends to one as agent a's does") {
    auto b = independent_cells({0.6, 0.4, 0.5}, 1.0);
    double previous = 0.0;
    for (double q : {0.5, 0.2, 0.1, 1e-2, 1e-3, 1e-5}) {
        auto a = independent_cells({q, q, q}, 1.0);
        std::vector<std::pair<FiniteRfsDensity, double>> in{{a, 0.5}, {b, 0.5}};
        double empty = gci_fuse_exact(in)(0);
        CHECK(empty > previous);
        previous = empty;
    }
    CHECK(previous > 0.99);
}

TEST_CASE("oracle check suite passes with defaults") {
    CheckOptions opts;
    opts.cases = 50;
    for (const auto& r : run_oracle_checks(opts)) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
}

TEST_CASE("oracle check options are validated") {
    CheckOptions opts;
    opts.cells = 13;
    CHECK_THROWS_AS(check_invariance(opts), PreconditionError);
    opts.cells = 4;
    opts.n_max = 0;
    opts.cases = 10;
    CHECK(check_invariance(opts).passed);
}
