#include "doctest.h"

#include <bird/poisson.hpp>
#include <bird/rng.hpp>

#include <limits>
#include <random>

using namespace bird;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GaussianMixture single(Vec4 mean, double var = 1.0) {
    return GaussianMixture{{GaussianComponent{1.0, mean, var * Mat4::Identity()}}};
}

PoissonPosterior two_term(double lambda) {
    GaussianMixture gm{{GaussianComponent{0.4, Vec4(0, 0, 0, 0), Mat4::Identity()},
                        GaussianComponent{0.6, Vec4(3, 1, 0, 0), 4.0 * Mat4::Identity()}}};
    return make_posterior(lambda, gm);
}

} // namespace

TEST_CASE("intensity is zero for lambda zero and outside the domain") {
    Rng rng{1};
    auto zero = make_posterior(0.0, single(Vec4::Zero()));
    CHECK(poisson_intensity(zero, Vec4::Zero()) == 0.0);
    auto boxed = make_posterior(2.0, single(Vec4::Zero()), Region::rect(-1, 1, -1, 1), rng);
    CHECK(poisson_intensity(boxed, Vec4(5, 0, 0, 0)) == 0.0);
}

TEST_CASE("intensity scales the Gaussian peak by lambda") {
    auto post = make_posterior(2.0, single(Vec4::Zero()));
    CHECK(poisson_intensity(post, Vec4::Zero()) ==
          doctest::Approx(2.0 / std::pow(2.0 * M_PI, 2.0)).epsilon(1e-14));
}

TEST_CASE("truncated intensity integrates to lambda") {
    Rng rng{2};
    auto domain = region_union(Region::rect(-1, 2, -1, 1), Region::disc(0, 1, 1));
    auto post = make_posterior(3.0, single(Vec4::Zero()), domain, rng, 20000);
    auto box = *domain.bounding_box();
    std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax);
    long n = 200000;
    double sum = 0.0;
    for (long i = 0; i < n; ++i) {
        Vec2 p(ux(rng), uy(rng));
        if (!domain.contains(p)) continue;
        double g = std::exp(-0.5 * p.squaredNorm()) / (2.0 * M_PI);
        sum += g;
    }
    double integral = post.lambda * sum / n * box.area() / post.components[0].mass;
    CHECK(integral == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("restrict to the domain itself is the identity") {
    Rng rng{3};
    auto post = two_term(2.5);
    auto r = restrict(post, post.domain, rng);
    CHECK(r.lambda == doctest::Approx(2.5).epsilon(1e-15));
    REQUIRE(r.size() == 2);
    CHECK(r.components[0].gaussian.weight == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("restrict of a deep interior component keeps lambda") {
    Rng rng{4};
    auto post = make_posterior(3.0, single(Vec4::Zero()));
    auto r = restrict(post, Region::rect(-8, 8, -8, 8), rng, 10000);
    CHECK(std::abs(r.lambda - 3.0) / 3.0 < 1e-6);
    auto disc = restrict(post, Region::disc(0, 0, 8 * std::sqrt(2.0)), rng, 10000);
    CHECK(std::abs(disc.lambda - 3.0) / 3.0 < 1e-6);
}

TEST_CASE("restrict to a half-plane halves a centered component") {
    Rng rng{5};
    auto post = make_posterior(2.0, single(Vec4::Zero()));
    auto r = restrict(post, Region::rect(0, kInf, -kInf, kInf), rng);
    CHECK(r.lambda == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("restrict with no mass gives the empty posterior") {
    Rng rng{6};
    auto post = make_posterior(2.0, single(Vec4::Zero()));
    auto r = restrict(post, Region::rect(100, 101, 100, 101), rng);
    CHECK(r.lambda == 0.0);
    CHECK(r.size() == 0);
}

TEST_CASE("restrict is idempotent") {
    Rng rng{7};
    auto post = two_term(2.0);
    auto region = Region::rect(-1, 2, -3, 0.5);
    auto once = restrict(post, region, rng);
    auto twice = restrict(once, region, rng);
    CHECK(twice.lambda == doctest::Approx(once.lambda).epsilon(1e-12));
    REQUIRE(twice.size() == once.size());
    for (std::size_t j = 0; j < once.size(); ++j)
        CHECK(twice.components[j].gaussian.weight ==
              doctest::Approx(once.components[j].gaussian.weight).epsilon(1e-12));
}

TEST_CASE("split conserves lambda exactly") {
    Rng rng{8};
    auto post = two_term(3.0);
    for (const auto& region : {Region::rect(0, 5, -5, 5), Region::disc(1, 0, 2)}) {
        auto [in, out] = split(post, region, rng);
        CHECK(in.lambda + out.lambda == doctest::Approx(3.0).epsilon(1e-14));
    }
}

TEST_CASE("split by the empty region") {
    Rng rng{9};
    auto post = two_term(3.0);
    auto [in, out] = split(post, Region::empty(), rng);
    CHECK(in.lambda == 0.0);
    CHECK(out.lambda == 3.0);
    CHECK(out.size() == 2);
}

TEST_CASE("split of a symmetric Gaussian by a half-plane") {
    Rng rng{10};
    auto post = make_posterior(4.0, single(Vec4::Zero()));
    auto [in, out] = split(post, Region::rect(-kInf, 0, -kInf, kInf), rng);
    CHECK(in.lambda == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(out.lambda == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("split then disjoint_union round trip") {
    Rng rng{11};
    auto post = two_term(3.0);
    auto [in, out] = split(post, Region::disc(0.5, 0.5, 1.5), rng);
    auto back = disjoint_union(in, out);
    CHECK(std::abs(back.lambda - 3.0) <= 1e-12);
    Rng probe{12};
    std::normal_distribution<double> n(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        Vec4 x(n(probe), n(probe), n(probe), n(probe));
        CHECK(poisson_intensity(back, x) == doctest::Approx(poisson_intensity(post, x)).epsilon(1e-9));
    }
}

TEST_CASE("disjoint_union weights and identity element") {
    Rng rng{13};
    auto a = make_posterior(1.0, single(Vec4::Zero()), Region::rect(-5, 0, -5, 5), rng);
    auto b = make_posterior(2.0, single(Vec4(2, 0, 0, 0)), Region::rect(0.5, 5, -5, 5), rng);
    auto u = disjoint_union(a, b);
    CHECK(u.lambda == 3.0);
    REQUIRE(u.size() == 2);
    CHECK(u.components[0].gaussian.weight == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(u.components[1].gaussian.weight == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (double x : {-4.0, -1.0, -0.1}) {
        Vec4 s(x, 0.3, 0, 0);
        CHECK(poisson_intensity(u, s) == doctest::Approx(poisson_intensity(a, s)).epsilon(1e-14));
    }
    auto back = restrict(u, a.domain, rng);
    CHECK(back.lambda == doctest::Approx(a.lambda).epsilon(1e-12));

    PoissonPosterior none;
    none.domain = Region::rect(10, 20, 10, 20);
    auto same = disjoint_union(a, none);
    CHECK(same.lambda == a.lambda);
    CHECK(same.domain.contains(Vec2(15, 15)));
}

TEST_CASE("disjoint_union rejects overlapping domains") {
    Rng rng{14};
    auto a = make_posterior(1.0, single(Vec4::Zero()), Region::rect(-5, 1, -5, 5), rng);
    auto b = make_posterior(1.0, single(Vec4::Zero()), Region::rect(0, 5, -5, 5), rng);
    CHECK_THROWS_AS(disjoint_union(a, b), PreconditionError);
}

TEST_CASE("regions_overlap") {
    Rng rng{15};
    CHECK(regions_overlap(Region::rect(0, 2, 0, 2), Region::rect(1, 3, 1, 3), rng));
    CHECK_FALSE(regions_overlap(Region::rect(0, 1, 0, 1), Region::rect(1, 2, 0, 1), rng));
    CHECK(regions_overlap(Region::disc(0, 0, 1), Region::disc(1, 0, 1), rng));
    CHECK_FALSE(regions_overlap(Region::disc(0, 0, 1), Region::disc(5, 0, 1), rng));
}

TEST_CASE("expected_count over a sub-region") {
    Rng rng{16};
    auto post = make_posterior(4.0, single(Vec4::Zero()));
    CHECK(expected_count(post, Region::rect(0, kInf, 0, kInf), rng) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("prune_merge merges identical terms on the same support") {
    Rng rng{17};
    GaussianMixture gm{{GaussianComponent{0.5, Vec4::Zero(), Mat4::Identity()},
                        GaussianComponent{0.5, Vec4::Zero(), Mat4::Identity()}}};
    auto post = make_posterior(2.0, gm, Region::rect(-1, 3, -2, 2), rng);
    auto out = prune_merge(post, PruneMergeParams{}, rng);
    REQUIRE(out.size() == 1);
    CHECK(out.lambda == doctest::Approx(2.0).epsilon(1e-14));
}
