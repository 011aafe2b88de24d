#pragma once

// Immutable weighted (di)graph in compressed adjacency form, edge-list
// ingestion, and the shortest-path kernels shared by centralities and
// reference-distance features.

#include "mcgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mcgraph {

using NodeId = std::size_t;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct EdgeInput {
    NodeId source;
    NodeId target;
    std::optional<double> weight;
};

struct Arc {
    NodeId source;
    NodeId target;
    double weight;

    friend bool operator==(const Arc&, const Arc&) = default;
};

class Graph {
public:
    Graph() = default;

    std::size_t node_count() const noexcept { return labels_.size(); }
    bool is_directed() const noexcept { return directed_; }

    /// Number of stored arcs; an undirected edge counts twice.
    std::size_t arc_count() const noexcept { return out_targets_.size(); }

    std::span<const NodeId> out_neighbors(NodeId i) const {
        return {out_targets_.data() + out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]};
    }
    std::span<const double> out_weights(NodeId i) const {
        return {out_weights_.data() + out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]};
    }
    std::span<const NodeId> in_neighbors(NodeId i) const {
        return {in_sources_.data() + in_offsets_[i], in_offsets_[i + 1] - in_offsets_[i]};
    }
    std::span<const double> in_weights(NodeId i) const {
        return {in_weights_.data() + in_offsets_[i], in_offsets_[i + 1] - in_offsets_[i]};
    }

    bool has_edge(NodeId i, NodeId j) const {
        auto nb = out_neighbors(i);
        return std::binary_search(nb.begin(), nb.end(), j);
    }

    /// W[i][j]; zero when there is no edge.
    double weight(NodeId i, NodeId j) const {
        auto nb = out_neighbors(i);
        auto it = std::lower_bound(nb.begin(), nb.end(), j);
        if (it == nb.end() || *it != j) return 0.0;
        return out_weights(i)[static_cast<std::size_t>(it - nb.begin())];
    }

    /// All stored arcs in (source, target) order. Undirected edges appear in
    /// both orientations.
    std::vector<Arc> arcs() const {
        std::vector<Arc> out;
        out.reserve(arc_count());
        for (NodeId i = 0; i < node_count(); ++i) {
            auto nb = out_neighbors(i);
            auto w = out_weights(i);
            for (std::size_t k = 0; k < nb.size(); ++k) out.push_back({i, nb[k], w[k]});
        }
        return out;
    }

    /// Edges as they would be written back out: every arc for directed graphs,
    /// one (u < v) orientation per edge for undirected graphs.
    std::vector<Arc> edges() const {
        auto all = arcs();
        if (!directed_) {
            std::erase_if(all, [](const Arc& a) { return a.source > a.target; });
        }
        return all;
    }

    /// True when some edge weight differs from 1.
    bool is_weighted() const {
        return std::any_of(out_weights_.begin(), out_weights_.end(),
                           [](double w) { return w != 1.0; });
    }

    const std::string& label(NodeId i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Sorted union of in- and out-neighbors.
    std::vector<NodeId> neighbors(NodeId i) const {
        auto out = out_neighbors(i);
        if (!directed_) return {out.begin(), out.end()};
        auto in = in_neighbors(i);
        std::vector<NodeId> merged;
        merged.reserve(out.size() + in.size());
        std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(merged));
        return merged;
    }

    friend Graph build_graph(std::span<const EdgeInput> edges, bool directed,
                             std::optional<std::size_t> node_count,
                             std::vector<std::string> labels);

private:
    bool directed_ = false;
    std::vector<std::string> labels_;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<NodeId> out_targets_;
    std::vector<double> out_weights_;
    std::vector<std::size_t> in_offsets_{0};
    std::vector<NodeId> in_sources_;
    std::vector<double> in_weights_;
};

/// Builds a graph from an edge list. Missing weights default to 1, duplicate
/// edges collapse by summing their weights, undirected edges are stored in both
/// orientations. `node_count` overrides n = 1 + max index; `labels`, when
/// given, must hold exactly n entries.
inline Graph build_graph(std::span<const EdgeInput> edges, bool directed,
                         std::optional<std::size_t> node_count = std::nullopt,
                         std::vector<std::string> labels = {}) {
    std::size_t n = 0;
    for (const auto& e : edges) n = std::max(n, std::max(e.source, e.target) + 1);
    if (node_count) {
        if (*node_count < n) {
            throw Error(ErrorCode::invalid_argument,
                        "node count " + std::to_string(*node_count) + " is smaller than 1 + max index " +
                            std::to_string(n - 1));
        }
        n = *node_count;
    }
    if (!labels.empty() && labels.size() < n) {
        throw Error(ErrorCode::invalid_argument, "label table shorter than node count");
    }
    if (labels.empty()) {
        labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    }
    n = labels.size();

    std::map<std::pair<NodeId, NodeId>, double> collapsed;
    for (const auto& e : edges) {
        const double w = e.weight.value_or(1.0);
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::invalid_weight, "edge (" + labels[e.source] + ", " + labels[e.target] +
                                                       ") has weight " + std::to_string(w));
        }
        if (e.source == e.target) {
            throw Error(ErrorCode::self_loop_rejected, "self-loop on node " + labels[e.source]);
        }
        auto key = directed ? std::pair{e.source, e.target}
                            : std::pair{std::min(e.source, e.target), std::max(e.source, e.target)};
        collapsed[key] += w;
    }

    std::vector<Arc> arcs;
    arcs.reserve(collapsed.size() * (directed ? 1 : 2));
    for (const auto& [key, w] : collapsed) {
        arcs.push_back({key.first, key.second, w});
        if (!directed) arcs.push_back({key.second, key.first, w});
    }
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
        return std::pair{a.source, a.target} < std::pair{b.source, b.target};
    });

    Graph g;
    g.directed_ = directed;
    g.labels_ = std::move(labels);
    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    for (const auto& a : arcs) {
        ++g.out_offsets_[a.source + 1];
        ++g.in_offsets_[a.target + 1];
    }
    std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
    std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
    g.out_targets_.resize(arcs.size());
    g.out_weights_.resize(arcs.size());
    g.in_sources_.resize(arcs.size());
    g.in_weights_.resize(arcs.size());
    std::vector<std::size_t> out_fill(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
    std::vector<std::size_t> in_fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    // arcs are sorted by (source, target), and sources are visited in order, so
    // both adjacency lists come out sorted.
    for (const auto& a : arcs) {
        g.out_targets_[out_fill[a.source]] = a.target;
        g.out_weights_[out_fill[a.source]++] = a.weight;
        g.in_sources_[in_fill[a.target]] = a.source;
        g.in_weights_[in_fill[a.target]++] = a.weight;
    }
    return g;
}

inline Graph build_graph(std::initializer_list<EdgeInput> edges, bool directed,
                         std::optional<std::size_t> node_count = std::nullopt) {
    return build_graph(std::span<const EdgeInput>(edges.begin(), edges.size()), directed, node_count);
}

/// Reconstructs the edge inputs of a graph, e.g. to derive a perturbed copy.
inline std::vector<EdgeInput> edge_inputs(const Graph& g) {
    std::vector<EdgeInput> out;
    for (const auto& e : g.edges()) out.push_back({e.source, e.target, e.weight});
    return out;
}

// ---------------------------------------------------------------------------
// Edge-list text format
//
//   # comment
//   source target [weight]
//   node                      (declares an isolated node)
//
// Labels are arbitrary non-whitespace tokens, mapped to dense indices in order
// of first appearance.
// ---------------------------------------------------------------------------

inline Graph parse_edge_list(std::istream& in, bool directed, const std::string& source_name = "<input>") {
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::string> labels;
    std::vector<EdgeInput> edges;
    auto intern = [&](const std::string& label) {
        auto [it, inserted] = index.try_emplace(label, labels.size());
        if (inserted) labels.push_back(label);
        return it->second;
    };
    auto fail = [&](std::size_t line_no, const std::string& msg) {
        return Error(ErrorCode::parse_error, source_name + ":" + std::to_string(line_no) + ": " + msg);
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tokens(line);
        std::vector<std::string> fields;
        for (std::string tok; tokens >> tok;) fields.push_back(tok);
        if (fields.empty() || fields.front().front() == '#') continue;
        if (fields.size() > 3) throw fail(line_no, "expected 'source target [weight]'");
        if (fields.size() == 1) {
            intern(fields[0]);
            continue;
        }
        std::optional<double> weight;
        if (fields.size() == 3) {
            std::size_t used = 0;
            double w = 0.0;
            try {
                w = std::stod(fields[2], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != fields[2].size()) throw fail(line_no, "weight '" + fields[2] + "' is not a number");
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw Error(ErrorCode::invalid_weight,
                            source_name + ":" + std::to_string(line_no) + ": negative or non-finite weight " + fields[2]);
            }
            weight = w;
        }
        if (fields[0] == fields[1]) {
            throw Error(ErrorCode::self_loop_rejected,
                        source_name + ":" + std::to_string(line_no) + ": self-loop on " + fields[0]);
        }
        NodeId s = intern(fields[0]);
        NodeId t = intern(fields[1]);
        edges.push_back({s, t, weight});
    }
    const std::size_t n = labels.size();
    return build_graph(edges, directed, n, std::move(labels));
}

inline Graph read_edge_list(const std::string& path, bool directed) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::invalid_argument, "cannot open input file " + path);
    return parse_edge_list(in, directed, path);
}

/// Writes the graph in the edge-list format. Isolated nodes are declared on
/// their own line so that the node set survives a round trip.
inline void write_edge_list(std::ostream& out, const Graph& g) {
    out.precision(17);
    for (NodeId i = 0; i < g.node_count(); ++i) {
        if (g.out_neighbors(i).empty() && g.in_neighbors(i).empty()) out << g.label(i) << '\n';
    }
    for (const auto& e : g.edges()) {
        out << g.label(e.source) << ' ' << g.label(e.target) << ' ' << e.weight << '\n';
    }
}

// ---------------------------------------------------------------------------
// Degrees and connectivity
// ---------------------------------------------------------------------------

struct DegreeVectors {
    std::vector<std::size_t> in_degree;
    std::vector<std::size_t> out_degree;
    std::vector<std::size_t> total_degree;
};

inline DegreeVectors degree_vectors(const Graph& g) {
    const std::size_t n = g.node_count();
    DegreeVectors d{std::vector<std::size_t>(n), std::vector<std::size_t>(n), std::vector<std::size_t>(n)};
    for (NodeId i = 0; i < n; ++i) {
        d.out_degree[i] = g.out_neighbors(i).size();
        d.in_degree[i] = g.in_neighbors(i).size();
        d.total_degree[i] = g.is_directed() ? d.in_degree[i] + d.out_degree[i] : d.out_degree[i];
    }
    return d;
}

/// Component id per node, ignoring edge direction. Ids are dense and ordered
/// by smallest member.
inline std::vector<std::size_t> weak_components(const Graph& g) {
    const std::size_t n = g.node_count();
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> comp(n, unset);
    std::vector<NodeId> stack;
    std::size_t next = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != unset) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            auto visit = [&](NodeId v) {
                if (comp[v] == unset) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            };
            for (NodeId v : g.out_neighbors(u)) visit(v);
            for (NodeId v : g.in_neighbors(u)) visit(v);
        }
        ++next;
    }
    return comp;
}

inline bool is_connected(const Graph& g) {
    auto comp = weak_components(g);
    return std::all_of(comp.begin(), comp.end(), [](std::size_t c) { return c == 0; });
}

// ---------------------------------------------------------------------------
// Shortest paths
// ---------------------------------------------------------------------------

enum class PathMetric {
    hop,               // every edge has length 1
    weighted,          // edge length = weight; zero-weight edges are not traversed
    inverse_weighted,  // edge length = 1 / weight; zero-weight edges are not traversed
};

enum class Traversal {
    outgoing,  // follow edges source -> target
    incoming,  // follow edges target -> source (distances *to* the source node)
};

struct PathDistances {
    NodeId source = 0;
    std::vector<double> dist;         // +infinity when unreachable
    std::vector<double> path_counts;  // number of distinct shortest paths; exact below 2^53
};

namespace detail {

/// Single-source shortest-path DAG: distances, path counts, predecessor lists,
/// and nodes in order of nondecreasing distance (Brandes' stack).
struct ShortestPathDag {
    std::vector<double> dist;
    std::vector<double> sigma;
    std::vector<std::vector<NodeId>> preds;
    std::vector<NodeId> order;
};

inline bool distances_tie(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline ShortestPathDag shortest_path_dag(const Graph& g, NodeId source, PathMetric metric,
                                         Traversal traversal = Traversal::outgoing) {
    const std::size_t n = g.node_count();
    ShortestPathDag r{std::vector<double>(n, infinity), std::vector<double>(n, 0.0),
                      std::vector<std::vector<NodeId>>(n), {}};
    r.order.reserve(n);
    r.dist[source] = 0.0;
    r.sigma[source] = 1.0;

    auto nbrs = [&](NodeId u) {
        return traversal == Traversal::outgoing ? g.out_neighbors(u) : g.in_neighbors(u);
    };
    auto wts = [&](NodeId u) {
        return traversal == Traversal::outgoing ? g.out_weights(u) : g.in_weights(u);
    };

    if (metric == PathMetric::hop) {
        std::queue<NodeId> frontier;
        frontier.push(source);
        while (!frontier.empty()) {
            NodeId u = frontier.front();
            frontier.pop();
            r.order.push_back(u);
            for (NodeId v : nbrs(u)) {
                if (r.dist[v] == infinity) {
                    r.dist[v] = r.dist[u] + 1.0;
                    frontier.push(v);
                }
                if (r.dist[v] == r.dist[u] + 1.0) {
                    r.sigma[v] += r.sigma[u];
                    r.preds[v].push_back(u);
                }
            }
        }
        return r;
    }

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<bool> settled(n, false);
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (settled[u] || d > r.dist[u]) continue;
        settled[u] = true;
        r.order.push_back(u);
        auto nb = nbrs(u);
        auto w = wts(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (w[k] <= 0.0) continue;
            const NodeId v = nb[k];
            if (settled[v]) continue;
            const double len = metric == PathMetric::weighted ? w[k] : 1.0 / w[k];
            const double cand = d + len;
            if (r.dist[v] != infinity && distances_tie(cand, r.dist[v])) {
                r.sigma[v] += r.sigma[u];
                r.preds[v].push_back(u);
            } else if (cand < r.dist[v]) {
                r.dist[v] = cand;
                r.sigma[v] = r.sigma[u];
                r.preds[v].assign(1, u);
                heap.push({cand, v});
            }
        }
    }
    return r;
}

} // namespace detail

/// Dijkstra (BFS for the hop metric) from `source`, with shortest-path counts.
inline PathDistances shortest_paths(const Graph& g, NodeId source, PathMetric metric,
                                    Traversal traversal = Traversal::outgoing) {
    if (source >= g.node_count()) {
        throw Error(ErrorCode::invalid_argument, "source node " + std::to_string(source) + " out of range");
    }
    auto dag = detail::shortest_path_dag(g, source, metric, traversal);
    return {source, std::move(dag.dist), std::move(dag.sigma)};
}

/// Metric used by the path-based centralities: weighted when the graph carries
/// non-unit weights, hop otherwise.
inline PathMetric default_metric(const Graph& g) {
    return g.is_weighted() ? PathMetric::weighted : PathMetric::hop;
}

} // namespace mcgraph
