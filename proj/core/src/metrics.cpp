#include "bird/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bird {

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
    // Kuhn-Munkres with potentials (e-maxx formulation), 1-based internally.
    const int n = static_cast<int>(cost.rows());
    const int m = static_cast<int>(cost.cols());
    if (n > m) throw PreconditionError("assignment needs rows <= cols");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> match(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> out(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (match[j] != 0) out[match[j] - 1] = j - 1;
    }
    return out;
}

OspaResult ospa(std::span<const Vec2> x, std::span<const Vec2> y, double c, double p) {
    if (!(c > 0.0)) throw PreconditionError("OSPA cutoff must be positive");
    if (!(p >= 1.0)) throw PreconditionError("OSPA order must be >= 1");
    if (x.empty() && y.empty()) return {};
    const bool swap = x.size() > y.size();
    const auto small = swap ? y : x;
    const auto large = swap ? x : y;
    const auto m = small.size();
    const auto n = large.size();

    double loc_sum = 0.0;
    if (m > 0) {
        Eigen::MatrixXd cost(m, n);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                cost(i, j) = std::pow(std::min((small[i] - large[j]).norm(), c), p);
            }
        }
        const auto assign = min_cost_assignment(cost);
        for (std::size_t i = 0; i < m; ++i) loc_sum += cost(i, assign[i]);
    }
    const double card_sum = std::pow(c, p) * static_cast<double>(n - m);
    const double nn = static_cast<double>(n);
    return {std::pow((loc_sum + card_sum) / nn, 1.0 / p), std::pow(loc_sum / nn, 1.0 / p),
            std::pow(card_sum / nn, 1.0 / p)};
}

std::vector<double> CardinalityStats::bias() const {
    std::vector<double> out(mean_estimated.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = mean_estimated[k] - mean_true[k];
    return out;
}

CardinalityStats cardinality_stats(const std::vector<std::vector<double>>& estimated,
                                   const std::vector<std::vector<double>>& truth) {
    if (estimated.size() != truth.size() || estimated.empty()) {
        throw PreconditionError("cardinality_stats: trial counts differ or are zero");
    }
    const std::size_t steps = estimated.front().size();
    CardinalityStats out;
    out.mean_estimated.assign(steps, 0.0);
    out.mean_true.assign(steps, 0.0);
    for (std::size_t t = 0; t < estimated.size(); ++t) {
        if (estimated[t].size() != steps || truth[t].size() != steps) {
            throw PreconditionError("cardinality_stats: time axes are not aligned");
        }
        for (std::size_t k = 0; k < steps; ++k) {
            out.mean_estimated[k] += estimated[t][k];
            out.mean_true[k] += truth[t][k];
        }
    }
    const double trials = static_cast<double>(estimated.size());
    for (std::size_t k = 0; k < steps; ++k) {
        out.mean_estimated[k] /= trials;
        out.mean_true[k] /= trials;
    }
    return out;
}

} // namespace bird
