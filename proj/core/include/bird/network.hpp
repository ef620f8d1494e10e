#pragma once

#include "bird/fusion.hpp"

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace bird {

/// Directed sensor graph. An edge (i, j) means node j receives from node i.
/// Self-loops (j, j) are always present.
class NetworkGraph {
public:
    NetworkGraph() = default;
    NetworkGraph(std::vector<int> node_ids, const std::vector<std::pair<int, int>>& edges);

    static NetworkGraph ring(int n, bool bidirectional = false);
    static NetworkGraph fully_connected(int n);

    [[nodiscard]] const std::vector<int>& nodes() const { return nodes_; }
    [[nodiscard]] const std::set<std::pair<int, int>>& edges() const { return edges_; }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] bool has_node(int id) const;
    /// Position of `id` in nodes(); throws PreconditionError for unknown ids.
    [[nodiscard]] std::size_t index_of(int id) const;

private:
    std::vector<int> nodes_;  // ascending
    std::set<std::pair<int, int>> edges_;
};

/// All i with (i, j) an edge, ascending by id. Throws PreconditionError for unknown j.
std::vector<int> in_neighbors(const NetworkGraph& g, int j);

/// Longest shortest directed path; -1 when some node cannot reach another.
int graph_diameter(const NetworkGraph& g);

/// One synchronous consensus step: node i's new state is the sequential BIRD
/// fusion of its in-neighbors' previous states in ascending-id order.
/// `states` is indexed like g.nodes(). Each node draws from the stream
/// derive_seed(seed, {round, node id}).
std::vector<LocalPosterior> consensus_round(const std::vector<LocalPosterior>& states,
                                            const NetworkGraph& g, const WeightSchedule& schedule,
                                            std::uint64_t seed, int round = 0,
                                            const FusionOptions& opts = {});

/// `rounds` consensus steps.
std::vector<LocalPosterior> run_consensus(std::vector<LocalPosterior> states, const NetworkGraph& g,
                                          int rounds, const WeightSchedule& schedule,
                                          std::uint64_t seed, const FusionOptions& opts = {});

} // namespace bird
