#pragma once

// Synthetic graphs: the symmetric star-of-cliques, Erdős–Rényi backgrounds and
// DoS-like star bursts.

#include "mcgraph/graph.hpp"
#include "mcgraph/random.hpp"

#include <algorithm>
#include <vector>

namespace mcgraph {

/// Node 0 is the center; clique c occupies nodes 1 + c*size .. (c+1)*size and
/// its first node (the gate) is the only one joined to the center.
inline std::vector<EdgeInput> star_of_cliques_edges(std::size_t cliques, std::size_t size) {
    std::vector<EdgeInput> edges;
    for (std::size_t c = 0; c < cliques; ++c) {
        const NodeId base = 1 + c * size;
        edges.push_back({0, base, 1.0});
        for (std::size_t a = 0; a < size; ++a) {
            for (std::size_t b = a + 1; b < size; ++b) edges.push_back({base + a, base + b, 1.0});
        }
    }
    return edges;
}

inline Graph star_of_cliques(std::size_t cliques, std::size_t size) {
    return build_graph(star_of_cliques_edges(cliques, size), false, 1 + cliques * size);
}

/// G(n, p); every potential arc (directed) or edge (undirected) appears
/// independently with probability p. Weights are 1.
inline std::vector<EdgeInput> erdos_renyi_edges(std::size_t n, double p, bool directed, Rng& rng) {
    std::vector<EdgeInput> edges;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = directed ? 0 : i + 1; j < n; ++j) {
            if (i != j && rng.bernoulli(p)) edges.push_back({i, j, 1.0});
        }
    }
    return edges;
}

/// Adds `count` arcs from distinct random nodes into `victim`.
inline void inject_star_burst(std::vector<EdgeInput>& edges, std::size_t n, NodeId victim, std::size_t count,
                              Rng& rng) {
    std::vector<NodeId> others;
    for (NodeId i = 0; i < n; ++i) {
        if (i != victim) others.push_back(i);
    }
    rng.shuffle(others);
    for (std::size_t k = 0; k < count && k < others.size(); ++k) edges.push_back({others[k], victim, 1.0});
}

struct IntrusionEnsembleOptions {
    std::size_t graphs = 7;
    std::size_t nodes = 300;
    double edge_probability = 0.01;
    bool directed = false;
    std::vector<std::size_t> attacked{2, 3, 4};  // zero-based graph indices
    std::size_t burst = 50;
    std::uint64_t seed = default_seed;
};

/// Erdős–Rényi backgrounds, some of which carry a star burst into a random
/// victim node.
inline std::vector<Graph> intrusion_ensemble(const IntrusionEnsembleOptions& opts = {}) {
    Rng rng(opts.seed);
    std::vector<Graph> out;
    for (std::size_t l = 0; l < opts.graphs; ++l) {
        auto edges = erdos_renyi_edges(opts.nodes, opts.edge_probability, opts.directed, rng);
        if (std::find(opts.attacked.begin(), opts.attacked.end(), l) != opts.attacked.end()) {
            const NodeId victim = rng.index(opts.nodes);
            inject_star_burst(edges, opts.nodes, victim, opts.burst, rng);
        }
        out.push_back(build_graph(edges, opts.directed, opts.nodes));
    }
    return out;
}

} // namespace mcgraph
