#pragma once

#include "bird/poisson.hpp"

#include <span>
#include <vector>

namespace bird {

/// GCI exponents for a pair of agents; omega_a + omega_b = 1.
struct FusionWeights {
    double omega_a = 0.5;
    double omega_b = 0.5;

    FusionWeights() = default;
    FusionWeights(double a, double b);
    static FusionWeights from_a(double a) { return {a, 1.0 - a}; }
};

struct FusionOptions {
    int mass_samples = kDefaultMassSamples;
    /// Applied to each input before exponentiation (only the merge threshold is used).
    double premerge_threshold = 4.0;
    /// Applied to the fused output.
    PruneMergeParams prune{};
    bool prune_output = true;
};

/// A local posterior together with the region it is defined on.
struct LocalPosterior {
    PoissonPosterior posterior;
    Region fov;
};

/// Weight used when folding agent j (1-based, j >= 2) into the running result.
struct WeightSchedule {
    enum class Kind { RunningAverage, Fixed };
    Kind kind = Kind::RunningAverage;
    double fixed_omega = 0.5;  // weight of the incoming agent when kind == Fixed

    [[nodiscard]] double incoming_weight(int j) const {
        return kind == Kind::RunningAverage ? 1.0 / static_cast<double>(j) : fixed_omega;
    }
};

/// log kappa(P, omega) = log sqrt(det[2 pi P / omega] * det[2 pi P]^(-omega)).
double log_kappa(const Mat4& cov, double omega);

/// Component-wise power [alpha N(m, P)]^omega ~= alpha^omega kappa(P, omega) N(m, P / omega).
/// Valid when the components are well separated; throws PreconditionError for omega outside (0, 1].
GaussianMixture gm_power(const GaussianMixture& mixture, double omega);

/// Poisson GCI of two posteriors defined on the same region `common`:
/// lambda = lambda_a^wa lambda_b^wb K, p proportional to p_a^wa p_b^wb.
/// Either lambda = 0 gives the empty posterior on `common`.
PoissonPosterior gci_fuse_common(const PoissonPosterior& a, const PoissonPosterior& b,
                                 const FusionWeights& w, const Region& common, Rng& rng,
                                 const FusionOptions& opts = {});

/// Pairwise BIRD fusion: GCI on fov_a ∩ fov_b, unit-weight (Bayes-invariant)
/// carry-over of each agent's exclusive part. Result lives on fov_a ∪ fov_b.
LocalPosterior bird_fuse_pair(const LocalPosterior& a, const LocalPosterior& b,
                              const FusionWeights& w, Rng& rng, const FusionOptions& opts = {});

/// Left fold of bird_fuse_pair over `inputs`; the running result enters each
/// pairwise step as agent a with weight 1 - schedule.incoming_weight(j).
LocalPosterior sequential_bird(std::span<const LocalPosterior> inputs, const WeightSchedule& schedule,
                               Rng& rng, const FusionOptions& opts = {});

/// Plain Poisson GCI over a.domain ∪ b.domain, without any FoV decomposition.
PoissonPosterior standard_gci(const PoissonPosterior& a, const PoissonPosterior& b,
                              const FusionWeights& w, Rng& rng, const FusionOptions& opts = {});

/// Uniform i.i.d.-cluster descriptor of the uninformative density on a bounded region.
struct UninformativeDensity {
    double volume = 0.0;
    double location_density = 0.0;  // 1 / volume
    bool exact = false;
};

UninformativeDensity uninformative_poisson(const Region& region, const Rect& bounding_box, Rng& rng,
                                           int samples = 100000);

} // namespace bird
