#pragma once

#include "bird/types.hpp"

#include <cstddef>
#include <vector>

namespace bird {

struct GaussianComponent {
    double weight = 0.0;
    Vec4 mean = Vec4::Zero();
    Mat4 cov = Mat4::Identity();
};

struct GaussianMixture {
    std::vector<GaussianComponent> components;

    [[nodiscard]] std::size_t size() const { return components.size(); }
    [[nodiscard]] bool empty() const { return components.empty(); }
    [[nodiscard]] double total_weight() const;
    /// Scales weights so they sum to one. No-op on an empty or zero-weight mixture.
    void normalize();
};

/// GM-PHD housekeeping thresholds. Defaults are the simulation-study values.
struct PruneMergeParams {
    double truncation = 1e-4;
    double merge = 4.0;
    std::size_t max_components = 150;
};

/// (P + P^T) / 2
Mat4 symmetrize(const Mat4& p);

/// Cholesky factor of a covariance. On failure retries once with
/// 1e-9 * trace(P)/4 added to the diagonal; throws NumericError if that fails too.
Eigen::LLT<Mat4> factorize(const Mat4& p);

/// log N(x; mean, cov), evaluated through the Cholesky factor.
double log_gaussian(const Vec4& x, const Vec4& mean, const Mat4& cov);
double log_gaussian(const Vec4& x, const Vec4& mean, const Eigen::LLT<Mat4>& chol);

/// log det(cov) from the Cholesky factor.
double log_det(const Eigen::LLT<Mat4>& chol);

/// Sum_j w_j N(x; m_j, P_j).
double gm_evaluate(const GaussianMixture& mixture, const Vec4& x);

/// Truncate (weight < truncation), merge clusters within squared Mahalanobis
/// distance `merge` of the heaviest remaining component, then keep at most
/// `max_components` of the heaviest. Merged weight is preserved; pruned weight is dropped.
GaussianMixture gm_prune_merge(const GaussianMixture& mixture, double truncation, double merge,
                               std::size_t max_components);

inline GaussianMixture gm_prune_merge(const GaussianMixture& mixture, const PruneMergeParams& p) {
    return gm_prune_merge(mixture, p.truncation, p.merge, p.max_components);
}

/// Moment-preserving merge of a non-empty set of components.
GaussianComponent moment_match(const std::vector<GaussianComponent>& parts);

} // namespace bird
