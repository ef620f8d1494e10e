#pragma once

#include "bird/types.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace bird {

struct OspaResult {
    double total = 0.0;
    double localization = 0.0;
    double cardinality = 0.0;
};

/// OSPA distance of order p with cutoff c between two planar point sets.
/// total^p = localization^p + cardinality^p; two empty sets give all zeros.
OspaResult ospa(std::span<const Vec2> x, std::span<const Vec2> y, double c = 100.0, double p = 2.0);

/// Minimum-cost assignment of every row to a distinct column (rows <= cols).
/// Returns the column chosen for each row.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

struct CardinalityStats {
    std::vector<double> mean_estimated;
    std::vector<double> mean_true;

    [[nodiscard]] std::vector<double> bias() const;
};

/// Per-step averages across trials. `estimated[t][k]` / `truth[t][k]` are the
/// counts of trial t at step k. Throws PreconditionError on misaligned axes.
CardinalityStats cardinality_stats(const std::vector<std::vector<double>>& estimated,
                                   const std::vector<std::vector<double>>& truth);

} // namespace bird
