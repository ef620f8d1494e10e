#include "bird/network.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace bird {

NetworkGraph::NetworkGraph(std::vector<int> node_ids, const std::vector<std::pair<int, int>>& edges)
    : nodes_(std::move(node_ids)) {
    std::sort(nodes_.begin(), nodes_.end());
    if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
        throw PreconditionError("duplicate node id in network graph");
    }
    for (int id : nodes_) edges_.emplace(id, id);
    for (const auto& [from, to] : edges) {
        if (!has_node(from) || !has_node(to)) {
            throw PreconditionError("edge (" + std::to_string(from) + ", " + std::to_string(to) +
                                    ") references an unknown node");
        }
        edges_.emplace(from, to);
    }
}

NetworkGraph NetworkGraph::ring(int n, bool bidirectional) {
    std::vector<int> ids(n);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        ids[i] = i + 1;
        const int next = (i + 1) % n + 1;
        edges.emplace_back(i + 1, next);
        if (bidirectional) edges.emplace_back(next, i + 1);
    }
    return {ids, edges};
}

NetworkGraph NetworkGraph::fully_connected(int n) {
    std::vector<int> ids(n);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        ids[i] = i + 1;
        for (int j = 0; j < n; ++j) edges.emplace_back(i + 1, j + 1);
    }
    return {ids, edges};
}

bool NetworkGraph::has_node(int id) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), id);
}

std::size_t NetworkGraph::index_of(int id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) throw PreconditionError("unknown node " + std::to_string(id));
    return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<int> in_neighbors(const NetworkGraph& g, int j) {
    if (!g.has_node(j)) throw PreconditionError("unknown node " + std::to_string(j));
    std::vector<int> out;
    for (const auto& [from, to] : g.edges()) {
        if (to == j) out.push_back(from);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int graph_diameter(const NetworkGraph& g) {
    int diameter = 0;
    for (int src : g.nodes()) {
        std::vector<int> dist(g.size(), -1);
        std::deque<int> queue{src};
        dist[g.index_of(src)] = 0;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (const auto& [from, to] : g.edges()) {
                if (from != u || dist[g.index_of(to)] >= 0) continue;
                dist[g.index_of(to)] = dist[g.index_of(u)] + 1;
                queue.push_back(to);
            }
        }
        for (int d : dist) {
            if (d < 0) return -1;
            diameter = std::max(diameter, d);
        }
    }
    return diameter;
}

std::vector<LocalPosterior> consensus_round(const std::vector<LocalPosterior>& states,
                                            const NetworkGraph& g, const WeightSchedule& schedule,
                                            std::uint64_t seed, int round, const FusionOptions& opts) {
    if (states.size() != g.size()) throw PreconditionError("one state per node is required");
    std::vector<LocalPosterior> next;
    next.reserve(states.size());
    for (int id : g.nodes()) {
        std::vector<LocalPosterior> inputs;
        for (int n : in_neighbors(g, id)) inputs.push_back(states[g.index_of(n)]);
        Rng rng = make_stream(seed, {static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(id)});
        next.push_back(sequential_bird(inputs, schedule, rng, opts));
    }
    return next;
}

std::vector<LocalPosterior> run_consensus(std::vector<LocalPosterior> states, const NetworkGraph& g,
                                          int rounds, const WeightSchedule& schedule,
                                          std::uint64_t seed, const FusionOptions& opts) {
    if (rounds < 0) throw PreconditionError("consensus rounds must be non-negative");
    for (int l = 1; l <= rounds; ++l) states = consensus_round(states, g, schedule, seed, l, opts);
    return states;
}

} // namespace bird
