#pragma once

#include "bird/oracle.hpp"
#include "bird/rng.hpp"

#include <string>
#include <vector>

namespace bird::oracle {

/// Random density on a grid of `cells` cells: i.i.d. uniform values on admissible
/// subsets, a fraction of them zeroed (the empty set always stays positive), normalized.
FiniteRfsDensity random_density(int cells, double cell_volume, int n_max, Rng& rng,
                                double zero_fraction = 0.2);

/// Independent per-cell occupancy with probabilities `q` (a grid multi-Bernoulli):
/// pi(X) = prod_{i in X} q_i / v * prod_{i not in X} (1 - q_i).
FiniteRfsDensity independent_cells(const std::vector<double>& q, double cell_volume);

struct CheckOptions {
    int cells = 8;        // largest grid drawn
    int n_max = 4;        // largest cardinality cap drawn
    int cases = 200;
    std::uint64_t seed = 1;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    int cases = 0;
    double worst = 0.0;      // largest observed error (or bound ratio)
    double tolerance = 0.0;
    std::string detail;
};

/// bayes_op(d, uninformative) = d and power_op(uninformative, omega) = uninformative.
CheckResult check_invariance(const CheckOptions& opts);

/// pi(X) = pi_W(X ∩ W) pi_V(X ∩ V | X ∩ W) for random (density, W).
CheckResult check_reconstruction(const CheckOptions& opts);

/// BIRD through explicit uninformative factors equals the reduced form.
CheckResult check_dual_path(const CheckOptions& opts);

/// Standard GCI of FoV-limited posteriors that wrongly claim "nothing outside my FoV"
/// (outside mass eps) loses the objects outside the common FoV: the fused
/// yes-probability there decreases with eps and stays below 10 eps^min(omega).
CheckResult check_gci_pathology(const CheckOptions& opts);

/// All four checks in order.
std::vector<CheckResult> run_oracle_checks(const CheckOptions& opts);

} // namespace bird::oracle
