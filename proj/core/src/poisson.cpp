#include "bird/poisson.hpp"

#include <algorithm>
#include <cmath>

namespace bird {

namespace {

// Set operations keyed by operand identity; components usually share a few supports.
class RegionMemo {
public:
    template <class Make>
    const Region& get(const Region& key, Make&& make) {
        for (const auto& [id, r] : entries_) {
            if (id == key.id()) return r;
        }
        entries_.emplace_back(key.id(), make());
        return entries_.back().second;
    }

private:
    std::vector<std::pair<const void*, Region>> entries_;
};


constexpr double kDeadMass = 1e-12;

// Fraction of term mass (over its current support) that lies in `target`,
// where `target` is a subset of the support. Exact when possible; otherwise
// both counts come from the same draws.
double inside_fraction(const PoissonComponent& term, const Region& target, Rng& rng, int samples) {
    if (target.same_as(term.support)) return 1.0;
    if (target.is_empty()) return 0.0;
    const Vec2 mean = position_of(term.gaussian.mean);
    const Mat2 cov = position_cov(term.gaussian.cov);
    const Region regions[] = {term.support, target};
    std::vector<long> counts;
    const auto masses = gaussian_masses(mean, cov, regions, samples, rng, &counts);
    if (masses[0].exact && masses[1].exact) {
        if (masses[0].value <= 0.0) return target.contains(mean) ? 1.0 : 0.0;
        return std::clamp(masses[1].value / masses[0].value, 0.0, 1.0);
    }
    if (masses[0].exact) {
        // support is `all`: the sampled target fraction is already conditional on it
        return masses[1].value;
    }
    if (counts[0] == 0) return target.contains(mean) ? 1.0 : 0.0;
    return static_cast<double>(counts[1]) / static_cast<double>(counts[0]);
}

struct Piece {
    std::vector<PoissonComponent> terms;
    double mass = 0.0;  // sum of w_j * fraction_j over kept terms
};

void keep(Piece& piece, const PoissonComponent& term, const Region& target, double fraction) {
    const double new_mass = term.mass * fraction;
    if (new_mass < kDeadMass || term.gaussian.weight * fraction <= 0.0) return;
    PoissonComponent out = term;
    out.gaussian.weight = term.gaussian.weight * fraction;
    out.support = target;
    out.mass = new_mass;
    piece.mass += out.gaussian.weight;
    piece.terms.push_back(std::move(out));
}

PoissonPosterior finish(double lambda, Piece piece, const Region& domain) {
    PoissonPosterior out;
    out.domain = domain;
    if (piece.mass <= 0.0 || lambda <= 0.0) return out;
    out.lambda = lambda * piece.mass;
    for (auto& t : piece.terms) t.gaussian.weight /= piece.mass;
    out.components = std::move(piece.terms);
    return out;
}

} // namespace

double PoissonPosterior::total_weight() const {
    double s = 0.0;
    for (const auto& c : components) s += c.gaussian.weight;
    return s;
}

GaussianMixture PoissonPosterior::location() const {
    GaussianMixture gm;
    gm.components.reserve(components.size());
    for (const auto& c : components) gm.components.push_back(c.gaussian);
    return gm;
}

PoissonPosterior make_posterior(double lambda, const GaussianMixture& location) {
    if (lambda < 0.0) throw PreconditionError("lambda must be non-negative");
    PoissonPosterior out;
    out.lambda = lambda;
    const double total = location.total_weight();
    for (const auto& g : location.components) {
        PoissonComponent t;
        t.gaussian = g;
        if (total > 0.0) t.gaussian.weight /= total;
        out.components.push_back(std::move(t));
    }
    if (out.components.empty()) out.lambda = 0.0;
    return out;
}

PoissonPosterior make_posterior(double lambda, const GaussianMixture& location, const Region& domain,
                                Rng& rng, int samples) {
    PoissonPosterior out = make_posterior(lambda, location);
    out.domain = domain;
    std::vector<PoissonComponent> kept;
    for (auto& t : out.components) {
        const auto m = gaussian_mass(t.gaussian, domain, samples, rng);
        if (m.value < kDeadMass) continue;
        t.support = domain;
        t.mass = m.value;
        kept.push_back(std::move(t));
    }
    out.components = std::move(kept);
    const double total = out.total_weight();
    if (total <= 0.0) {
        out.lambda = 0.0;
        out.components.clear();
        return out;
    }
    for (auto& t : out.components) t.gaussian.weight /= total;
    return out;
}

double poisson_intensity(const PoissonPosterior& post, const Vec4& x) {
    if (post.lambda == 0.0 || !contains_state(post.domain, x)) return 0.0;
    double sum = 0.0;
    for (const auto& t : post.components) {
        if (t.gaussian.weight == 0.0 || !contains_state(t.support, x)) continue;
        sum += t.gaussian.weight / t.mass * std::exp(log_gaussian(x, t.gaussian.mean, t.gaussian.cov));
    }
    return post.lambda * sum;
}

double expected_count(const PoissonPosterior& post, const Region& region, Rng& rng, int samples) {
    double k = 0.0;
    RegionMemo memo;
    for (const auto& t : post.components) {
        const Region& target = memo.get(t.support, [&] { return region_intersect(t.support, region); });
        k += t.gaussian.weight * inside_fraction(t, target, rng, samples);
    }
    return post.lambda * k;
}

PoissonPosterior restrict(const PoissonPosterior& post, const Region& region, Rng& rng, int samples) {
    const Region domain = region_intersect(region, post.domain);
    Piece piece;
    RegionMemo memo;
    for (const auto& t : post.components) {
        const Region& target = memo.get(t.support, [&] { return region_intersect(t.support, region); });
        keep(piece, t, target, inside_fraction(t, target, rng, samples));
    }
    return finish(post.lambda, std::move(piece), domain);
}

std::pair<PoissonPosterior, PoissonPosterior> split(const PoissonPosterior& post,
                                                    const Region& region, Rng& rng, int samples) {
    const Region in_domain = region_intersect(post.domain, region);
    const Region out_domain = region_difference(post.domain, region);
    Piece in, out;
    RegionMemo in_memo, out_memo;
    for (const auto& t : post.components) {
        const Region& in_target = in_memo.get(t.support, [&] { return region_intersect(t.support, region); });
        const Region& out_target = out_memo.get(t.support, [&] { return region_difference(t.support, region); });
        const double f = inside_fraction(t, in_target, rng, samples);
        keep(in, t, in_target, f);
        keep(out, t, out_target, 1.0 - f);
    }
    return {finish(post.lambda, std::move(in), in_domain),
            finish(post.lambda, std::move(out), out_domain)};
}

bool regions_overlap(const Region& a, const Region& b, Rng& rng, int probes) {
    const Region both = region_intersect(a, b);
    if (both.is_empty()) return false;
    if (const auto* cells = both.cells()) {
        for (const auto& c : *cells) {
            if (c.area() > 0.0) return true;
        }
        return false;
    }
    const auto box = both.bounding_box();
    if (!box) return true;  // unbounded and non-empty
    std::uniform_real_distribution<double> ux(box->xmin, box->xmax);
    std::uniform_real_distribution<double> uy(box->ymin, box->ymax);
    for (int i = 0; i < probes; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        if (both.contains(Vec2(x, y))) return true;
    }
    return false;
}

PoissonPosterior disjoint_union(const PoissonPosterior& a, const PoissonPosterior& b) {
    Rng probe{0x0b5e55edULL};
    if (regions_overlap(a.domain, b.domain, probe)) {
        throw PreconditionError("disjoint_union: domains overlap");
    }
    PoissonPosterior out;
    out.domain = region_union(a.domain, b.domain);
    out.lambda = a.lambda + b.lambda;
    if (out.lambda <= 0.0) {
        out.lambda = 0.0;
        return out;
    }
    out.components.reserve(a.size() + b.size());
    for (const auto* part : {&a, &b}) {
        if (part->lambda <= 0.0) continue;
        const double scale = part->lambda / out.lambda;
        for (auto t : part->components) {
            t.gaussian.weight *= scale;
            out.components.push_back(std::move(t));
        }
    }
    return out;
}

PoissonPosterior prune_merge(const PoissonPosterior& post, const PruneMergeParams& params, Rng& rng,
                             int samples) {
    std::vector<PoissonComponent> pool;
    for (const auto& t : post.components) {
        if (post.lambda * t.gaussian.weight >= params.truncation && t.gaussian.weight > 0.0) {
            pool.push_back(t);
        }
    }
    std::stable_sort(pool.begin(), pool.end(), [](const auto& x, const auto& y) {
        return x.gaussian.weight > y.gaussian.weight;
    });

    bool dropped = pool.size() != post.components.size();
    std::vector<PoissonComponent> merged;
    std::vector<bool> used(pool.size(), false);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (used[i]) continue;
        const auto chol = factorize(pool[i].gaussian.cov);
        std::vector<GaussianComponent> cluster{pool[i].gaussian};
        used[i] = true;
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            if (used[j] || !pool[j].support.equivalent(pool[i].support)) continue;
            const Vec4 d = pool[j].gaussian.mean - pool[i].gaussian.mean;
            if (chol.matrixL().solve(d).squaredNorm() <= params.merge) {
                cluster.push_back(pool[j].gaussian);
                used[j] = true;
            }
        }
        PoissonComponent t = pool[i];
        if (cluster.size() > 1) {
            t.gaussian = moment_match(cluster);
            if (!t.support.is_all()) {
                t.mass = gaussian_mass(t.gaussian, t.support, samples, rng).value;
                if (t.mass < kDeadMass) {
                    dropped = true;
                    continue;
                }
            }
        }
        merged.push_back(std::move(t));
    }
    std::stable_sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) {
        return x.gaussian.weight > y.gaussian.weight;
    });
    if (merged.size() > params.max_components) {
        merged.resize(params.max_components);
        dropped = true;
    }

    PoissonPosterior out;
    out.domain = post.domain;
    double kept = 0.0;
    for (const auto& t : merged) kept += t.gaussian.weight;
    if (kept <= 0.0) return out;
    // Merging moves mass between terms without changing the total.
    out.lambda = dropped ? post.lambda * kept : post.lambda;
    for (auto& t : merged) t.gaussian.weight /= kept;
    out.components = std::move(merged);
    return out;
}

} // namespace bird
