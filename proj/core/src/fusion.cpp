#include "bird/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace bird {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
// Pairs whose unnormalized weight is this far (in log) below the heaviest pair
// contribute < 1e-16 relative and are skipped before the mass integration.
constexpr double kLogNegligible = -37.0;

struct PreparedTerm {
    const PoissonComponent* term;
    Mat4 info;       // omega * P^-1
    Vec4 info_mean;  // omega * P^-1 * m
    Mat4 scaled;     // P / omega
    double log_coef; // omega * log(w / c) + log kappa(P, omega)
};

std::vector<PreparedTerm> prepare(const PoissonPosterior& post, double omega) {
    std::vector<PreparedTerm> out;
    out.reserve(post.size());
    for (const auto& t : post.components) {
        if (t.gaussian.weight <= 0.0) continue;
        const auto chol = factorize(t.gaussian.cov);
        const Mat4 inv = chol.solve(Mat4::Identity());
        PreparedTerm p{&t, omega * symmetrize(inv), Vec4::Zero(), t.gaussian.cov / omega, 0.0};
        p.info_mean = p.info * t.gaussian.mean;
        p.log_coef = omega * std::log(t.gaussian.weight / t.mass) + log_kappa(t.gaussian.cov, omega);
        out.push_back(std::move(p));
    }
    return out;
}

PoissonPosterior premerge(const PoissonPosterior& post, const FusionOptions& opts, Rng& rng) {
    PruneMergeParams params;
    params.truncation = 0.0;
    params.merge = opts.premerge_threshold;
    params.max_components = std::numeric_limits<std::size_t>::max();
    return prune_merge(post, params, rng, opts.mass_samples);
}

PoissonPosterior with_domain(PoissonPosterior p, const Region& domain) {
    p.domain = domain;
    return p;
}

} // namespace

FusionWeights::FusionWeights(double a, double b) : omega_a(a), omega_b(b) {
    if (a < 0.0 || b < 0.0 || std::abs(a + b - 1.0) > 1e-12) {
        throw PreconditionError("fusion weights must be non-negative and sum to one");
    }
}

double log_kappa(const Mat4& cov, double omega) {
    const double ld = log_det(factorize(cov));
    const double log_det_scaled = 4.0 * kLog2Pi + ld - 4.0 * std::log(omega);
    const double log_det_base = 4.0 * kLog2Pi + ld;
    return 0.5 * (log_det_scaled - omega * log_det_base);
}

GaussianMixture gm_power(const GaussianMixture& mixture, double omega) {
    if (!(omega > 0.0) || omega > 1.0) throw PreconditionError("gm_power: omega must lie in (0, 1]");
    GaussianMixture out;
    out.components.reserve(mixture.size());
    for (const auto& c : mixture.components) {
        GaussianComponent p;
        p.mean = c.mean;
        p.cov = symmetrize(c.cov / omega);
        p.weight = omega == 1.0 ? c.weight : std::pow(c.weight, omega) * std::exp(log_kappa(c.cov, omega));
        out.components.push_back(p);
    }
    return out;
}

PoissonPosterior gci_fuse_common(const PoissonPosterior& a_in, const PoissonPosterior& b_in,
                                 const FusionWeights& w, const Region& common, Rng& rng,
                                 const FusionOptions& opts) {
    PoissonPosterior empty;
    empty.domain = common;
    if (a_in.lambda <= 0.0 || b_in.lambda <= 0.0 || a_in.components.empty() ||
        b_in.components.empty()) {
        return empty;
    }
    if (w.omega_b == 0.0) return with_domain(a_in, common);
    if (w.omega_a == 0.0) return with_domain(b_in, common);

    const PoissonPosterior a = premerge(a_in, opts, rng);
    const PoissonPosterior b = premerge(b_in, opts, rng);
    const auto pa = prepare(a, w.omega_a);
    const auto pb = prepare(b, w.omega_b);

    struct Pair {
        std::size_t i, j;
        double log_alpha;
    };
    std::vector<Pair> pairs;
    pairs.reserve(pa.size() * pb.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        for (std::size_t j = 0; j < pb.size(); ++j) {
            const Mat4 sum = pa[i].scaled + pb[j].scaled;
            const double lg = log_gaussian(pa[i].term->gaussian.mean, pb[j].term->gaussian.mean, sum);
            const double la = pa[i].log_coef + pb[j].log_coef + lg;
            pairs.push_back({i, j, la});
            best = std::max(best, la);
        }
    }

    std::vector<std::tuple<const void*, const void*, Region>> supports;
    auto fused_support = [&](const Region& sa, const Region& sb) -> const Region& {
        for (const auto& [ia, ib, r] : supports) {
            if (ia == sa.id() && ib == sb.id()) return r;
        }
        supports.emplace_back(sa.id(), sb.id(), region_intersect(region_intersect(sa, sb), common));
        return std::get<2>(supports.back());
    };

    std::vector<PoissonComponent> fused;
    std::vector<double> rel;  // alpha * c / exp(best)
    double k_rel = 0.0;
    for (const auto& pr : pairs) {
        if (pr.log_alpha - best < kLogNegligible) continue;
        const auto& ta = pa[pr.i];
        const auto& tb = pb[pr.j];
        const Mat4 info = ta.info + tb.info;
        const auto chol = Eigen::LLT<Mat4>(symmetrize(info));
        if (chol.info() != Eigen::Success) throw NumericError("gci: information sum is not positive definite");
        PoissonComponent t;
        t.gaussian.cov = symmetrize(chol.solve(Mat4::Identity()));
        t.gaussian.mean = chol.solve(ta.info_mean + tb.info_mean);
        t.support = fused_support(ta.term->support, tb.term->support);
        const double c = gaussian_mass(t.gaussian, t.support, opts.mass_samples, rng).value;
        if (c < 1e-12) continue;
        t.mass = c;
        const double r = std::exp(pr.log_alpha - best) * c;
        k_rel += r;
        rel.push_back(r);
        fused.push_back(std::move(t));
    }
    if (k_rel <= 0.0) return empty;

    PoissonPosterior out;
    out.domain = common;
    // lambda = lambda_a^wa lambda_b^wb K, K = exp(best) * k_rel
    out.lambda = std::exp(w.omega_a * std::log(a.lambda) + w.omega_b * std::log(b.lambda) + best +
                          std::log(k_rel));
    for (std::size_t n = 0; n < fused.size(); ++n) fused[n].gaussian.weight = rel[n] / k_rel;
    out.components = std::move(fused);
    if (opts.prune_output) out = prune_merge(out, opts.prune, rng, opts.mass_samples);
    return out;
}

LocalPosterior bird_fuse_pair(const LocalPosterior& a, const LocalPosterior& b, const FusionWeights& w,
                              Rng& rng, const FusionOptions& opts) {
    const Region common = region_intersect(a.fov, b.fov);
    auto [a_co, a_nc] = split(a.posterior, common, rng, opts.mass_samples);
    auto [b_co, b_nc] = split(b.posterior, common, rng, opts.mass_samples);

    PoissonPosterior fused_co;
    fused_co.domain = common;
    if (!common.is_empty()) {
        FusionOptions inner = opts;
        inner.prune_output = false;
        fused_co = gci_fuse_common(a_co, b_co, w, common, rng, inner);
    }
    a_nc.domain = region_difference(a.fov, common);
    b_nc.domain = region_difference(b.fov, common);

    PoissonPosterior out = disjoint_union(disjoint_union(fused_co, a_nc), b_nc);
    const Region global = region_union(a.fov, b.fov);
    out.domain = global;
    if (opts.prune_output) out = prune_merge(out, opts.prune, rng, opts.mass_samples);
    return {std::move(out), global};
}

LocalPosterior sequential_bird(std::span<const LocalPosterior> inputs, const WeightSchedule& schedule,
                               Rng& rng, const FusionOptions& opts) {
    if (inputs.empty()) throw PreconditionError("sequential_bird needs at least one posterior");
    LocalPosterior acc = inputs.front();
    for (std::size_t j = 1; j < inputs.size(); ++j) {
        const double incoming = schedule.incoming_weight(static_cast<int>(j + 1));
        acc = bird_fuse_pair(acc, inputs[j], FusionWeights::from_a(1.0 - incoming), rng, opts);
    }
    return acc;
}

PoissonPosterior standard_gci(const PoissonPosterior& a, const PoissonPosterior& b,
                              const FusionWeights& w, Rng& rng, const FusionOptions& opts) {
    const Region global = region_union(a.domain, b.domain);
    if (w.omega_b == 0.0) return a;
    if (w.omega_a == 0.0) return b;
    return gci_fuse_common(a, b, w, global, rng, opts);
}

UninformativeDensity uninformative_poisson(const Region& region, const Rect& bounding_box, Rng& rng,
                                           int samples) {
    if (region.is_empty()) throw PreconditionError("uninformative density on an empty region");
    if (!region.bounding_box() || !bounding_box.bounded()) {
        throw PreconditionError("uninformative density needs a bounded region");
    }
    const auto v = region_volume(region, bounding_box, samples, rng);
    if (v.value <= 0.0) throw PreconditionError("uninformative density on a null region");
    return {v.value, 1.0 / v.value, v.exact};
}

} // namespace bird
