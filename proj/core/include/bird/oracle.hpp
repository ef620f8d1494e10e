#pragma once

#include "bird/types.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

/// Exact finite-set calculus on a discretized state space: a handful of grid
/// cells of volume v, finite sets of distinct cells, cardinality capped at n_max.
/// Ground truth for the continuous GM machinery.
namespace bird::oracle {

/// Bitmask over cell ids 0..cells-1.
using Subset = std::uint32_t;

inline constexpr int kMaxCells = 12;
inline constexpr int kMaxCardinality = 12;

inline int cardinality(Subset s) { return __builtin_popcount(s); }

/// Multi-object density table pi(X) over all subsets of the grid.
/// Entries with |X| > n_max are zero.
class FiniteRfsDensity {
public:
    FiniteRfsDensity(int cells, double cell_volume, int n_max);

    [[nodiscard]] int cells() const { return cells_; }
    [[nodiscard]] double cell_volume() const { return volume_; }
    [[nodiscard]] int n_max() const { return n_max_; }
    [[nodiscard]] Subset full() const { return (Subset{1} << cells_) - 1; }
    [[nodiscard]] std::size_t table_size() const { return table_.size(); }
    [[nodiscard]] bool admissible(Subset x) const { return cardinality(x) <= n_max_; }

    [[nodiscard]] double operator()(Subset x) const { return table_[x]; }
    /// Throws PreconditionError on a negative value or an inadmissible subset with a non-zero value.
    void set(Subset x, double value);

    [[nodiscard]] const std::vector<double>& table() const { return table_; }

private:
    int cells_;
    double volume_;
    int n_max_;
    std::vector<double> table_;
};

/// Thrown when a normalizer vanishes (e.g. product of densities with disjoint support).
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sum over admissible X of pi(X) v^|X|.
double set_integral(const FiniteRfsDensity& d);

/// d / set_integral(d); DegenerateInput if the integral is zero.
FiniteRfsDensity normalized(const FiniteRfsDensity& d);

/// (a ⊕ b)(X) = a(X) b(X) / ∫ a b.
FiniteRfsDensity bayes_op(const FiniteRfsDensity& a, const FiniteRfsDensity& b);

/// (omega ⊙ a)(X) = a(X)^omega / ∫ a^omega.
FiniteRfsDensity power_op(const FiniteRfsDensity& a, double omega);

/// ⊕_i (omega_i ⊙ pi_i), weights summing to one. Zero-weight inputs are skipped.
FiniteRfsDensity gci_fuse_exact(std::span<const std::pair<FiniteRfsDensity, double>> inputs);

/// pi_W(X) = sum over X' ⊆ complement(W) of pi(X ∪ X') v^|X'|, for X ⊆ W (zero elsewhere).
FiniteRfsDensity marginalize(const FiniteRfsDensity& d, Subset w_cells);

/// pi_V(X' | given) = pi(X' ∪ given) / pi_W(given) over X' ⊆ V = complement(W),
/// with the constant-one table when pi_W(given) = 0.
FiniteRfsDensity condition(const FiniteRfsDensity& d, Subset w_cells, Subset given);

/// Uninformative density over all cells: constant 1 / sum_{m<=n_max} C(n, m) v^m
/// (the grid form of sum V^m / m!).
FiniteRfsDensity uninformative_exact(int cells, double cell_volume, int n_max);

/// Uninformative density supported on the subsets of `region` (other cells empty).
FiniteRfsDensity uninformative_on(int cells, double cell_volume, Subset region, int n_max);

enum class BirdPath {
    Explicit,  // GCI with explicit uninformative factors at unit exponent
    Reduced,   // GCI on the common cells times the exclusive conditionals
};

/// Exact two-agent BIRD fusion on the grid. Each density is first marginalized to
/// its FoV; the result is a normalized density supported on fov_a ∪ fov_b.
FiniteRfsDensity bird_fuse_exact(const FiniteRfsDensity& a, Subset fov_a, const FiniteRfsDensity& b,
                                 Subset fov_b, double omega_a, BirdPath path = BirdPath::Reduced);

/// Probability that at least one object lies in `region`.
double yes_probability(const FiniteRfsDensity& d, Subset region);

/// Kullback-Leibler divergence ∫ f log(f / g) δX (infinite if f is not dominated by g).
double kl_divergence(const FiniteRfsDensity& f, const FiniteRfsDensity& g);

/// max |a(X) - b(X)| over the table.
double max_abs_diff(const FiniteRfsDensity& a, const FiniteRfsDensity& b);

} // namespace bird::oracle
