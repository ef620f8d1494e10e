#pragma once

#include "bird/gaussian_mixture.hpp"
#include "bird/region.hpp"
#include "bird/rng.hpp"

#include <span>
#include <vector>

namespace bird {

/// Default Monte Carlo sample count per component per region query.
inline constexpr int kDefaultMassSamples = 1000;

struct MassEstimate {
    double value = 0.0;
    double std_error = 0.0;  // binomial sqrt(c(1-c)/M); zero on exact paths
    bool exact = false;
};

/// Standard normal CDF.
double normal_cdf(double x);

/// P(a <= X <= b) for X ~ N(mean, var), computed without cancellation in the tails.
double normal_interval(double a, double b, double mean, double var);

/// Integral of N(mean, cov) over a region of the plane.
///
/// Exact for `all`/`empty` and for disc-free regions (sum over the rectangle cells of
/// CDF products, or bivariate normal CDFs when the covariance is correlated).
/// Regions containing discs use an unbiased Monte Carlo estimate from `samples` draws of `rng`.
MassEstimate gaussian_mass(const Vec2& mean, const Mat2& cov, const Region& region, int samples,
                           Rng& rng);

/// Same, using the position marginal of a 4-D component.
MassEstimate gaussian_mass(const GaussianComponent& component, const Region& region, int samples,
                           Rng& rng);

/// Masses of one Gaussian over several regions from a single sample set
/// (common random numbers), so additive identities between the regions hold
/// exactly on the MC path. `counts` receives raw hit counts when not null (zero if exact).
std::vector<MassEstimate> gaussian_masses(const Vec2& mean, const Mat2& cov,
                                          std::span<const Region> regions, int samples, Rng& rng,
                                          std::vector<long>* counts = nullptr);

/// Area of `region`; exact for rectangle decompositions and single discs, otherwise
/// MC over `bounding_box`.
MassEstimate region_volume(const Region& region, const Rect& bounding_box, int samples, Rng& rng);

/// Position block of a 4x4 covariance.
inline Mat2 position_cov(const Mat4& p) { return p.topLeftCorner<2, 2>(); }

} // namespace bird
