#pragma once

#include "bird/gaussian_mixture.hpp"
#include "bird/geometry.hpp"
#include "bird/region.hpp"
#include "bird/rng.hpp"

#include <utility>
#include <vector>

namespace bird {

/// One term of a Poisson location density: a Gaussian truncated to `support`
/// and renormalized, i.e. N(x; mean, cov) * 1_support(x) / mass.
struct PoissonComponent {
    GaussianComponent gaussian;  // gaussian.weight is the probability mass of this term
    Region support = Region::all();
    double mass = 1.0;  // integral of the Gaussian's position marginal over `support`
};

/// Poisson RFS posterior (lambda, p) on `domain`.
///
/// The represented intensity is
///   lambda * sum_j w_j N(x; m_j, P_j) 1_{S_j}(x) / c_j,
/// with sum_j w_j = 1 and every S_j inside `domain`, so it integrates to lambda.
struct PoissonPosterior {
    double lambda = 0.0;
    std::vector<PoissonComponent> components;
    Region domain = Region::all();

    [[nodiscard]] std::size_t size() const { return components.size(); }
    [[nodiscard]] double total_weight() const;
    /// Location density with the truncation dropped (weights are the term masses).
    [[nodiscard]] GaussianMixture location() const;
};

/// Untruncated posterior over the whole plane.
PoissonPosterior make_posterior(double lambda, const GaussianMixture& location);

/// Posterior on `domain`: every component of `location` is truncated to the
/// domain and renormalized; weights are kept as given (normalized first).
PoissonPosterior make_posterior(double lambda, const GaussianMixture& location, const Region& domain,
                                Rng& rng, int samples = kDefaultMassSamples);

/// lambda * p(x) * 1_domain(position(x)).
double poisson_intensity(const PoissonPosterior& post, const Vec4& x);

/// Expected number of objects within `region` (integral of the intensity).
double expected_count(const PoissonPosterior& post, const Region& region, Rng& rng,
                      int samples = kDefaultMassSamples);

/// Marginal of the Poisson RFS on `region`: (lambda K_W, p_W) with K_W the
/// location mass inside region ∩ domain. Terms whose mass there is below 1e-12
/// are dropped. Returns lambda 0 with no terms when K_W = 0.
PoissonPosterior restrict(const PoissonPosterior& post, const Region& region, Rng& rng,
                          int samples = kDefaultMassSamples);

/// Factorization into independent parts inside / outside `region`, sharing one
/// sample set per term so that lambda_in + lambda_out = lambda.
std::pair<PoissonPosterior, PoissonPosterior> split(const PoissonPosterior& post,
                                                    const Region& region, Rng& rng,
                                                    int samples = kDefaultMassSamples);

/// Superposition of two Poisson RFSs on disjoint domains. Throws
/// PreconditionError when the domains are found to overlap.
PoissonPosterior disjoint_union(const PoissonPosterior& a, const PoissonPosterior& b);

/// True if the two regions share positive area. Exact for disc-free regions;
/// otherwise tested on `probes` points drawn over the bounding box of the
/// intersection.
bool regions_overlap(const Region& a, const Region& b, Rng& rng, int probes = 4096);

/// Prune/merge/cap on intensity weights lambda * w_j. Only terms with the same
/// support are merged; a merged term's mass is re-evaluated over its support.
PoissonPosterior prune_merge(const PoissonPosterior& post, const PruneMergeParams& params, Rng& rng,
                             int samples = kDefaultMassSamples);

} // namespace bird
