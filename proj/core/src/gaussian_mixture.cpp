#include "bird/gaussian_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace bird {

double GaussianMixture::total_weight() const {
    return std::accumulate(components.begin(), components.end(), 0.0,
                           [](double s, const GaussianComponent& c) { return s + c.weight; });
}

void GaussianMixture::normalize() {
    const double total = total_weight();
    if (total <= 0.0) return;
    for (auto& c : components) c.weight /= total;
}

Mat4 symmetrize(const Mat4& p) { return 0.5 * (p + p.transpose()); }

Eigen::LLT<Mat4> factorize(const Mat4& p) {
    const Mat4 sym = symmetrize(p);
    Eigen::LLT<Mat4> llt(sym);
    if (llt.info() == Eigen::Success) return llt;
    const double jitter = 1e-9 * std::max(sym.trace(), 0.0) / 4.0;
    llt.compute(sym + jitter * Mat4::Identity());
    if (llt.info() != Eigen::Success || jitter <= 0.0) {
        throw NumericError("covariance is not positive definite");
    }
    return llt;
}

double log_det(const Eigen::LLT<Mat4>& chol) {
    return 2.0 * chol.matrixLLT().diagonal().array().log().sum();
}

double log_gaussian(const Vec4& x, const Vec4& mean, const Eigen::LLT<Mat4>& chol) {
    const Vec4 white = chol.matrixL().solve(x - mean);
    constexpr double log_2pi = 1.8378770664093453;
    return -0.5 * (white.squaredNorm() + log_det(chol) + 4.0 * log_2pi);
}

double log_gaussian(const Vec4& x, const Vec4& mean, const Mat4& cov) {
    return log_gaussian(x, mean, factorize(cov));
}

double gm_evaluate(const GaussianMixture& mixture, const Vec4& x) {
    double sum = 0.0;
    for (const auto& c : mixture.components) {
        if (c.weight == 0.0) continue;
        sum += c.weight * std::exp(log_gaussian(x, c.mean, c.cov));
    }
    return sum;
}

GaussianComponent moment_match(const std::vector<GaussianComponent>& parts) {
    GaussianComponent out;
    out.weight = 0.0;
    out.mean.setZero();
    for (const auto& p : parts) {
        out.weight += p.weight;
        out.mean += p.weight * p.mean;
    }
    if (out.weight <= 0.0) {
        out.mean = parts.front().mean;
        out.cov = parts.front().cov;
        return out;
    }
    out.mean /= out.weight;
    out.cov.setZero();
    for (const auto& p : parts) {
        const Vec4 d = p.mean - out.mean;
        out.cov += p.weight * (p.cov + d * d.transpose());
    }
    out.cov = symmetrize(out.cov / out.weight);
    return out;
}

GaussianMixture gm_prune_merge(const GaussianMixture& mixture, double truncation, double merge,
                               std::size_t max_components) {
    std::vector<GaussianComponent> pool;
    pool.reserve(mixture.size());
    for (const auto& c : mixture.components) {
        if (c.weight >= truncation && c.weight > 0.0) pool.push_back(c);
    }
    // Heaviest first; stable so ties keep insertion order.
    std::stable_sort(pool.begin(), pool.end(),
                     [](const auto& a, const auto& b) { return a.weight > b.weight; });

    GaussianMixture out;
    std::vector<bool> used(pool.size(), false);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (used[i]) continue;
        const auto chol = factorize(pool[i].cov);
        std::vector<GaussianComponent> cluster;
        for (std::size_t j = i; j < pool.size(); ++j) {
            if (used[j]) continue;
            const Vec4 d = pool[j].mean - pool[i].mean;
            const double d2 = chol.matrixL().solve(d).squaredNorm();
            if (j == i || d2 <= merge) {
                cluster.push_back(pool[j]);
                used[j] = true;
            }
        }
        out.components.push_back(cluster.size() == 1 ? cluster.front() : moment_match(cluster));
    }
    std::stable_sort(out.components.begin(), out.components.end(),
                     [](const auto& a, const auto& b) { return a.weight > b.weight; });
    if (out.components.size() > max_components) out.components.resize(max_components);
    return out;
}

} // namespace bird
