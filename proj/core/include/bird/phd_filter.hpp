#pragma once

#include "bird/poisson.hpp"

#include <vector>

namespace bird {

struct MotionModel {
    Mat4 F = Mat4::Identity();
    Mat4 Q = Mat4::Zero();
    double dt = 1.0;

    /// Nearly-constant-velocity model with acceleration std `sigma_w` (m/s^2).
    static MotionModel constant_velocity(double dt, double sigma_w);
};

struct SensorModel {
    Mat24 H = (Mat24() << 1, 0, 0, 0, 0, 1, 0, 0).finished();
    Mat2 R = 100.0 * Mat2::Identity();
    double detect_inside = 0.98;
    double detect_outside = 0.98;
    double clutter_rate = 10.0;
    Region clutter_region = Region::all();
    Region fov = Region::all();

    /// P_D at a state, evaluated on its position.
    [[nodiscard]] double detection(const Vec4& x) const {
        return contains_state(fov, x) ? detect_inside : detect_outside;
    }
};

/// Position-dependent survival probability, relative to `fov`.
struct SurvivalProfile {
    double inside = 0.98;
    double outside = 0.98;
    Region fov = Region::all();

    [[nodiscard]] double at(const Vec4& x) const { return contains_state(fov, x) ? inside : outside; }
};

/// Observation-driven birth: one component per measurement of the previous scan.
struct BirthParams {
    double weight = 0.05;
    double position_var = 100.0;  // m^2, matched to R
    double velocity_std = 10.0;   // m/s
};

/// GM-PHD prediction. Survival is evaluated at the component means; birth terms are appended.
PoissonPosterior phd_predict(const PoissonPosterior& post, const MotionModel& motion,
                             const SurvivalProfile& survival, const PoissonPosterior& birth);

/// GM-PHD correction followed by prune/merge/cap with `prune`.
PoissonPosterior phd_update(const PoissonPosterior& prior, const std::vector<Vec2>& measurements,
                            const SensorModel& sensor, const PruneMergeParams& prune = {});

PoissonPosterior adaptive_birth(const std::vector<Vec2>& measurements, const BirthParams& params = {});

/// Marginal on the local FoV (the pre-fusion step of Form III).
PoissonPosterior marginalize_to_fov(const PoissonPosterior& post, const Region& fov, Rng& rng,
                                    int samples = kDefaultMassSamples);

/// round(lambda) highest-weight means among terms with intensity weight > 0.5.
/// Terms within squared Mahalanobis distance `merge` are pooled first, so a
/// Gaussian split across several supports counts once.
std::vector<Vec4> extract_estimates(const PoissonPosterior& post, double merge = 4.0);

/// Intensity-weighted mixture (weights lambda * w_j, truncation dropped).
GaussianMixture intensity_of(const PoissonPosterior& post);

/// Inverse of intensity_of: (total weight, normalized mixture), untruncated.
PoissonPosterior from_intensity(const GaussianMixture& intensity);

} // namespace bird
