#pragma once

// Node centralities: degree, betweenness, closeness, eigenvector, ego and
// local Fiedler vector centrality (LFVC), plus the per-graph-type feasibility
// table that says which of them are meaningful.

#include "mcgraph/error.hpp"
#include "mcgraph/graph.hpp"
#include "mcgraph/laplacian.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcgraph {

enum class Centrality { degree, betweenness, closeness, eigenvector, ego, lfvc };

inline constexpr std::array<Centrality, 6> all_centralities{Centrality::degree,      Centrality::betweenness,
                                                            Centrality::closeness,   Centrality::eigenvector,
                                                            Centrality::ego,         Centrality::lfvc};

constexpr std::string_view to_string(Centrality c) noexcept {
    switch (c) {
    case Centrality::degree: return "degree";
    case Centrality::betweenness: return "betweenness";
    case Centrality::closeness: return "closeness";
    case Centrality::eigenvector: return "eigenvector";
    case Centrality::ego: return "ego";
    case Centrality::lfvc: return "lfvc";
    }
    return "unknown";
}

inline Centrality parse_centrality(std::string_view name) {
    for (auto c : all_centralities) {
        if (to_string(c) == name) return c;
    }
    throw Error(ErrorCode::invalid_argument, "unknown centrality '" + std::string(name) + "'");
}

struct GraphTraits {
    bool weighted = false;
    bool directed = false;
    bool disconnected = false;

    static GraphTraits of(const Graph& g) { return {g.is_weighted(), g.is_directed(), !is_connected(g)}; }
};

/// Which centralities are usable on which graph types. Every measure handles
/// weights; betweenness and closeness need a connected graph; LFVC needs an
/// undirected one.
constexpr bool feasible(Centrality c, const GraphTraits& t) noexcept {
    switch (c) {
    case Centrality::betweenness:
    case Centrality::closeness:
        return !t.disconnected;
    case Centrality::lfvc:
        return !t.directed;
    default:
        return true;
    }
}

/// Shortest-path distances to reference nodes share the connectivity
/// requirement of betweenness and closeness.
constexpr bool distance_feasible(const GraphTraits& t) noexcept { return !t.disconnected; }

struct CentralityVector {
    Centrality measure = Centrality::degree;
    std::vector<double> values;
    bool feasible = true;
    /// Eigenvalue behind eigenvector centrality (lambda_max) or LFVC (Fiedler value).
    std::optional<double> eigenvalue;
};

inline CentralityVector degree_centrality(const Graph& g) {
    auto d = degree_vectors(g);
    CentralityVector out{Centrality::degree, {}, true, std::nullopt};
    out.values.assign(d.total_degree.begin(), d.total_degree.end());
    return out;
}

/// Brandes accumulation. Undirected graphs count each unordered pair once.
inline CentralityVector betweenness(const Graph& g, std::optional<PathMetric> metric = std::nullopt) {
    const std::size_t n = g.node_count();
    const PathMetric m = metric.value_or(default_metric(g));
    std::vector<double> bc(n, 0.0);
    std::vector<double> delta(n);
    for (NodeId s = 0; s < n; ++s) {
        auto dag = detail::shortest_path_dag(g, s, m);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = dag.order.rbegin(); it != dag.order.rend(); ++it) {
            const NodeId w = *it;
            for (NodeId v : dag.preds[w]) delta[v] += dag.sigma[v] / dag.sigma[w] * (1.0 + delta[w]);
            if (w != s) bc[w] += delta[w];
        }
    }
    if (!g.is_directed()) {
        for (double& v : bc) v *= 0.5;
    }
    return {Centrality::betweenness, std::move(bc), !GraphTraits::of(g).disconnected, std::nullopt};
}

/// 1 / (sum of distances to reachable nodes); nodes reaching nothing get 0.
inline CentralityVector closeness(const Graph& g, std::optional<PathMetric> metric = std::nullopt) {
    const std::size_t n = g.node_count();
    const PathMetric m = metric.value_or(default_metric(g));
    std::vector<double> values(n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        auto dag = detail::shortest_path_dag(g, i, m);
        double total = 0.0;
        for (NodeId j = 0; j < n; ++j) {
            if (j != i && std::isfinite(dag.dist[j])) total += dag.dist[j];
        }
        values[i] = total > 0.0 ? 1.0 / total : 0.0;
    }
    return {Centrality::closeness, std::move(values), !GraphTraits::of(g).disconnected, std::nullopt};
}

struct EigenvectorOptions {
    double tol = 1e-10;
    std::size_t max_iter = 1000;
};

namespace detail {

// y = W^T x.
inline Eigen::VectorXd transpose_weight_times(const Graph& g, const Eigen::VectorXd& x) {
    Eigen::VectorXd y(x.size());
    for (NodeId i = 0; i < g.node_count(); ++i) {
        auto nb = g.in_neighbors(i);
        auto w = g.in_weights(i);
        double s = 0.0;
        for (std::size_t k = 0; k < nb.size(); ++k) s += w[k] * x(static_cast<Eigen::Index>(nb[k]));
        y(static_cast<Eigen::Index>(i)) = s;
    }
    return y;
}

// Kahn's algorithm over positive-weight arcs.
inline bool positive_arcs_acyclic(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::size_t> indeg(n, 0);
    for (NodeId i = 0; i < n; ++i) {
        for (double w : g.in_weights(i)) indeg[i] += w > 0.0 ? 1 : 0;
    }
    std::vector<NodeId> ready;
    for (NodeId i = 0; i < n; ++i) {
        if (indeg[i] == 0) ready.push_back(i);
    }
    std::size_t removed = 0;
    while (!ready.empty()) {
        NodeId u = ready.back();
        ready.pop_back();
        ++removed;
        auto nb = g.out_neighbors(u);
        auto w = g.out_weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (w[k] > 0.0 && --indeg[nb[k]] == 0) ready.push_back(nb[k]);
        }
    }
    return removed == n;
}


// Tarjan's algorithm over positive-weight arcs, iterative. Returns the
// component id of every node.
inline std::vector<std::size_t> strong_components(const Graph& g, std::size_t& count) {
    const std::size_t n = g.node_count();
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stack;
    std::vector<std::pair<NodeId, std::size_t>> call;  // node, next arc position
    std::size_t next_index = 0;
    count = 0;
    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        call.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [u, k] = call.back();
            auto nb = g.out_neighbors(u);
            auto w = g.out_weights(u);
            if (k < nb.size()) {
                const NodeId v = nb[k];
                const double wk = w[k];
                ++k;
                if (wk <= 0.0) continue;
                if (index[v] == unset) {
                    index[v] = low[v] = next_index++;
                    stack.push_back(v);
                    on_stack[v] = true;
                    call.push_back({v, 0});
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
                continue;
            }
            const NodeId done = u;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                NodeId v;
                do {
                    v = stack.back();
                    stack.pop_back();
                    on_stack[v] = false;
                    comp[v] = count;
                } while (v != done);
                ++count;
            }
        }
    }
    return comp;
}

// Upper bound on the Perron root of W^T restricted to one strongly connected
// component, tightened by Collatz-Wielandt bounds on shifted power iterates.
inline double component_perron_bound(const Graph& g, const std::vector<NodeId>& members,
                                     const std::vector<std::size_t>& comp, std::size_t id, std::size_t max_iter) {
    if (members.size() == 1) return 0.0;
    std::vector<std::size_t> local(g.node_count(), 0);
    for (std::size_t a = 0; a < members.size(); ++a) local[members[a]] = a;
    const auto m = static_cast<Eigen::Index>(members.size());
    double shift = 0.0;
    for (NodeId u : members) {
        double in = 0.0;
        for (double w : g.in_weights(u)) in += w;
        shift = std::max(shift, in);
    }
    shift *= 0.5;
    Eigen::VectorXd x = Eigen::VectorXd::Ones(m);
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < max_iter; ++it) {
        Eigen::VectorXd y = shift * x;
        for (Eigen::Index a = 0; a < m; ++a) {
            const NodeId u = members[static_cast<std::size_t>(a)];
            auto nb = g.in_neighbors(u);
            auto w = g.in_weights(u);
            for (std::size_t k = 0; k < nb.size(); ++k) {
                if (comp[nb[k]] == id && w[k] > 0.0) y(a) += w[k] * x(static_cast<Eigen::Index>(local[nb[k]]));
            }
        }
        const Eigen::ArrayXd ratio = y.array() / x.array();
        const double lo = ratio.minCoeff(), hi = ratio.maxCoeff();
        upper = std::min(upper, hi);
        if (hi - lo <= 1e-14 * hi) break;
        x = y / y.maxCoeff();
    }
    return upper - shift;
}

} // namespace detail

/// Perron vector of W^T, unit L2 norm, largest entry positive.
///
/// Iterates on W^T + alpha*I, which has the same eigenvectors but a unique
/// dominant eigenvalue even on bipartite or otherwise periodic graphs. When the
/// positive-weight arcs form a DAG, W^T is nilpotent and the spectral radius is
/// 0; the result is then the normalized indicator of the sink nodes, which W^T
/// maps to zero.
inline CentralityVector eigenvector_centrality(const Graph& g, const EigenvectorOptions& opts = {}) {
    const std::size_t n = g.node_count();
    double max_in = 0.0, max_out = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        double in = 0.0, out = 0.0;
        for (double w : g.in_weights(i)) in += w;
        for (double w : g.out_weights(i)) out += w;
        max_in = std::max(max_in, in);
        max_out = std::max(max_out, out);
    }
    if (max_in <= 0.0) throw Error(ErrorCode::zero_matrix, "eigenvector centrality needs at least one weighted edge");

    CentralityVector out{Centrality::eigenvector, std::vector<double>(n, 0.0), true, std::nullopt};
    if (g.is_directed() && detail::positive_arcs_acyclic(g)) {
        std::vector<NodeId> sinks;
        for (NodeId i = 0; i < n; ++i) {
            auto w = g.out_weights(i);
            if (std::none_of(w.begin(), w.end(), [](double x) { return x > 0.0; })) sinks.push_back(i);
        }
        const double v = 1.0 / std::sqrt(static_cast<double>(sinks.size()));
        for (NodeId i : sinks) out.values[i] = v;
        out.eigenvalue = 0.0;
        return out;
    }

    const double shift = 0.5 * std::min(max_in, max_out);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    bool converged = false;
    for (std::size_t it = 0; it < opts.max_iter; ++it) {
        Eigen::VectorXd y = detail::transpose_weight_times(g, x) + shift * x;
        y.normalize();
        const double diff = (y - x).norm();
        x = std::move(y);
        if (diff < opts.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        // Reducible W^T whose spectral radius is shared by several strong
        // components (a Jordan block) makes power iteration crawl. Inverse
        // iteration just above the spectral radius does not.
        std::size_t comps = 0;
        const auto comp = detail::strong_components(g, comps);
        std::vector<std::vector<NodeId>> members(comps);
        for (NodeId i = 0; i < n; ++i) members[comp[i]].push_back(i);
        double rho = 0.0;
        for (std::size_t c = 0; c < comps; ++c) {
            rho = std::max(rho, detail::component_perron_bound(g, members[c], comp, c, 100 * opts.max_iter));
        }
        const double sigma = rho + 1e-9 * std::max(rho, 1.0);
        std::vector<Eigen::Triplet<double>> entries;
        for (NodeId i = 0; i < n; ++i) {
            entries.emplace_back(static_cast<int>(i), static_cast<int>(i), sigma);
            auto nb = g.in_neighbors(i);
            auto w = g.in_weights(i);
            for (std::size_t k = 0; k < nb.size(); ++k) entries.emplace_back(static_cast<int>(i), static_cast<int>(nb[k]), -w[k]);
        }
        Eigen::SparseMatrix<double> shifted(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        shifted.setFromTriplets(entries.begin(), entries.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(shifted);
        if (lu.info() != Eigen::Success) {
            throw Error(ErrorCode::no_convergence, "eigenvector centrality: shifted system could not be factored");
        }
        x = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n)));
        for (std::size_t it = 0; it < 200; ++it) {
            x = lu.solve(x);
            x.normalize();
        }
        const double residual = (detail::transpose_weight_times(g, x) - rho * x).norm();
        if (!(residual <= 1e-9 * std::max(rho, 1.0))) {
            throw Error(ErrorCode::no_convergence, "eigenvector centrality did not converge in " +
                                                       std::to_string(opts.max_iter) + " iterations (residual " +
                                                       std::to_string(residual) + ")");
        }
        x = x.cwiseMax(0.0);
        x.normalize();
    }
    Eigen::Index arg = 0;
    x.cwiseAbs().maxCoeff(&arg);
    if (x(arg) < 0.0) x = -x;
    out.eigenvalue = x.dot(detail::transpose_weight_times(g, x));
    for (NodeId i = 0; i < n; ++i) out.values[i] = x(static_cast<Eigen::Index>(i));
    return out;
}

/// Local betweenness inside each node's closed neighborhood: for pairs (k, j)
/// of the ego network that are not directly linked, add 1 / [W(i)^2]_kj, the
/// inverse weighted count of two-step paths, skipping pairs with no such path.
/// Undirected graphs sum unordered pairs, directed graphs ordered pairs.
inline CentralityVector ego_centrality(const Graph& g) {
    const std::size_t n = g.node_count();
    constexpr auto absent = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> pos(n, absent);
    std::vector<double> row;
    std::vector<double> values(n, 0.0);

    for (NodeId i = 0; i < n; ++i) {
        std::vector<NodeId> members = g.neighbors(i);
        if (members.size() <= 1) continue;
        members.insert(std::lower_bound(members.begin(), members.end(), i), i);
        for (std::size_t a = 0; a < members.size(); ++a) pos[members[a]] = a;
        row.assign(members.size(), 0.0);

        double total = 0.0;
        for (std::size_t a = 0; a < members.size(); ++a) {
            const NodeId k = members[a];
            std::fill(row.begin(), row.end(), 0.0);
            auto k_nb = g.out_neighbors(k);
            auto k_w = g.out_weights(k);
            for (std::size_t e = 0; e < k_nb.size(); ++e) {
                const NodeId mid = k_nb[e];
                if (pos[mid] == absent) continue;
                auto m_nb = g.out_neighbors(mid);
                auto m_w = g.out_weights(mid);
                for (std::size_t f = 0; f < m_nb.size(); ++f) {
                    if (pos[m_nb[f]] != absent) row[pos[m_nb[f]]] += k_w[e] * m_w[f];
                }
            }
            const std::size_t from = g.is_directed() ? 0 : a + 1;
            for (std::size_t b = from; b < members.size(); ++b) {
                if (b == a || row[b] <= 0.0 || g.has_edge(k, members[b])) continue;
                total += 1.0 / row[b];
            }
        }
        values[i] = total;
        for (NodeId m : members) pos[m] = absent;
    }
    return {Centrality::ego, std::move(values), true, std::nullopt};
}

/// LFVC(i) = sum_j Wsym_ij (y_i - y_j)^2 with y a unit Fiedler vector of the
/// symmetrized Laplacian. A repeated Fiedler value is handled by averaging over
/// an orthonormal basis of its eigenspace, which does not depend on the basis.
inline CentralityVector lfvc(const Graph& g, const FiedlerOptions& opts = {}) {
    const auto sym = symmetrize(g);
    const auto space = fiedler_space(sym, opts);
    const std::size_t n = g.node_count();
    std::vector<double> values(n, 0.0);
    for (const auto& y : space.vectors) {
        for (NodeId i = 0; i < n; ++i) {
            const double yi = y(static_cast<Eigen::Index>(i));
            double s = 0.0;
            for (std::size_t k = 0; k < sym.neighbors[i].size(); ++k) {
                const double d = yi - y(static_cast<Eigen::Index>(sym.neighbors[i][k]));
                s += sym.weights[i][k] * d * d;
            }
            values[i] += s;
        }
    }
    const double scale = 1.0 / static_cast<double>(space.vectors.size());
    for (double& v : values) v *= scale;
    return {Centrality::lfvc, std::move(values), !g.is_directed(), space.eigenvalue};
}

struct CentralityOptions {
    std::optional<PathMetric> path_metric;  // unset: weighted iff the graph is
    EigenvectorOptions eigenvector;
    FiedlerOptions fiedler;
};

inline CentralityVector compute_centrality(const Graph& g, Centrality c, const CentralityOptions& opts = {}) {
    switch (c) {
    case Centrality::degree: return degree_centrality(g);
    case Centrality::betweenness: return betweenness(g, opts.path_metric);
    case Centrality::closeness: return closeness(g, opts.path_metric);
    case Centrality::eigenvector: return eigenvector_centrality(g, opts.eigenvector);
    case Centrality::ego: return ego_centrality(g);
    case Centrality::lfvc: return lfvc(g, opts.fiedler);
    }
    throw Error(ErrorCode::invalid_argument, "unknown centrality");
}

} // namespace mcgraph
