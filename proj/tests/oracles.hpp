#pragma once

// Brute-force reference computations for the test suites. Nothing here calls
// into the library's numerical kernels: paths come from exhaustive simple-path
// enumeration, walks from explicit enumeration or dense matrix powers, and
// eigen/singular values from a cyclic Jacobi solver.

#include "mcgraph/graph.hpp"
#include "mcgraph/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, std::vector<double>(c, 0.0)); }

inline Matrix dense_adjacency(const mcgraph::Graph& g) {
    auto a = zeros(g.node_count(), g.node_count());
    for (const auto& arc : g.arcs()) a[arc.source][arc.target] = 1.0;
    return a;
}

inline Matrix dense_weights(const mcgraph::Graph& g) {
    auto w = zeros(g.node_count(), g.node_count());
    for (const auto& arc : g.arcs()) w[arc.source][arc.target] = arc.weight;
    return w;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size(), m = b.front().size(), k = b.size();
    auto c = zeros(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t)
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    return c;
}

inline Matrix transpose(const Matrix& a) {
    if (a.empty()) return {};
    auto t = zeros(a.front().size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

/// [A^h 1]_i from explicit matrix powers.
inline std::vector<double> walk_counts_by_power(const mcgraph::Graph& g, std::size_t h) {
    const auto a = dense_adjacency(g);
    Matrix p = a;
    for (std::size_t k = 1; k < h; ++k) p = multiply(p, a);
    std::vector<double> out(g.node_count(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (double v : p[i]) out[i] += v;
    return out;
}

/// Sum over all h-hop walks leaving each node of the walk's total edge weight.
inline std::vector<double> walk_weights_by_enumeration(const mcgraph::Graph& g, std::size_t h) {
    std::vector<double> out(g.node_count(), 0.0);
    std::function<void(mcgraph::NodeId, std::size_t, double, std::size_t)> walk =
        [&](mcgraph::NodeId u, std::size_t depth, double acc, std::size_t start) {
            if (depth == h) {
                out[start] += acc;
                return;
            }
            auto nb = g.out_neighbors(u);
            auto w = g.out_weights(u);
            for (std::size_t k = 0; k < nb.size(); ++k) walk(nb[k], depth + 1, acc + w[k], start);
        };
    for (mcgraph::NodeId i = 0; i < g.node_count(); ++i) walk(i, 0, 0.0, i);
    return out;
}

struct PathSet {
    double length = std::numeric_limits<double>::infinity();
    std::vector<std::vector<mcgraph::NodeId>> paths;  // all simple paths of minimal length
};

inline double edge_length(double w, mcgraph::PathMetric metric) {
    switch (metric) {
    case mcgraph::PathMetric::hop: return 1.0;
    case mcgraph::PathMetric::weighted: return w;
    case mcgraph::PathMetric::inverse_weighted: return 1.0 / w;
    }
    return 1.0;
}

inline bool same_length(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

/// Every simple path from s to t, keeping those of minimal length.
inline PathSet shortest_simple_paths(const mcgraph::Graph& g, mcgraph::NodeId s, mcgraph::NodeId t,
                                     mcgraph::PathMetric metric) {
    PathSet best;
    if (s == t) {
        best.length = 0.0;
        best.paths.push_back({s});
        return best;
    }
    std::vector<bool> on_path(g.node_count(), false);
    std::vector<mcgraph::NodeId> path{s};
    on_path[s] = true;
    std::function<void(mcgraph::NodeId, double)> dfs = [&](mcgraph::NodeId u, double len) {
        if (u == t) {
            if (same_length(len, best.length)) {
                best.paths.push_back(path);
            } else if (len < best.length) {
                best.length = len;
                best.paths.assign(1, path);
            }
            return;
        }
        auto nb = g.out_neighbors(u);
        auto w = g.out_weights(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            if (on_path[nb[k]]) continue;
            if (metric != mcgraph::PathMetric::hop && w[k] <= 0.0) continue;
            on_path[nb[k]] = true;
            path.push_back(nb[k]);
            dfs(nb[k], len + edge_length(w[k], metric));
            path.pop_back();
            on_path[nb[k]] = false;
        }
    };
    dfs(s, 0.0);
    return best;
}

/// Betweenness by enumerating every shortest path of every pair.
inline std::vector<double> betweenness_by_enumeration(const mcgraph::Graph& g, mcgraph::PathMetric metric) {
    const std::size_t n = g.node_count();
    std::vector<double> bc(n, 0.0);
    for (mcgraph::NodeId k = 0; k < n; ++k) {
        for (mcgraph::NodeId j = 0; j < n; ++j) {
            if (k == j || (!g.is_directed() && j < k)) continue;
            auto ps = shortest_simple_paths(g, k, j, metric);
            if (ps.paths.empty()) continue;
            const double total = static_cast<double>(ps.paths.size());
            for (const auto& p : ps.paths) {
                for (std::size_t pos = 1; pos + 1 < p.size(); ++pos) bc[p[pos]] += 1.0 / total;
            }
        }
    }
    return bc;
}

inline std::vector<double> closeness_by_enumeration(const mcgraph::Graph& g, mcgraph::PathMetric metric) {
    const std::size_t n = g.node_count();
    std::vector<double> out(n, 0.0);
    for (mcgraph::NodeId i = 0; i < n; ++i) {
        double total = 0.0;
        for (mcgraph::NodeId j = 0; j < n; ++j) {
            if (i == j) continue;
            auto ps = shortest_simple_paths(g, i, j, metric);
            if (!ps.paths.empty()) total += ps.length;
        }
        out[i] = total > 0.0 ? 1.0 / total : 0.0;
    }
    return out;
}

struct EigenPairs {
    std::vector<double> values;  // ascending
    Matrix vectors;              // vectors[k] is the eigenvector of values[k]
};

/// Cyclic Jacobi rotations for a symmetric matrix.
inline EigenPairs jacobi_eigen(Matrix a) {
    const std::size_t n = a.size();
    Matrix v = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });
    EigenPairs out;
    for (std::size_t k : order) {
        out.values.push_back(a[k][k]);
        std::vector<double> vec(n);
        for (std::size_t i = 0; i < n; ++i) vec[i] = v[i][k];
        out.vectors.push_back(vec);
    }
    return out;
}

/// Squared singular values of x (n x p), descending, from the Gram matrix.
inline std::vector<double> squared_singular_values(const Matrix& x) {
    auto gram = multiply(transpose(x), x);
    auto eig = jacobi_eigen(gram);
    std::vector<double> s = eig.values;
    std::reverse(s.begin(), s.end());
    for (double& v : s) v = std::max(v, 0.0);
    return s;
}

/// ||Z - best rank-k approximation||_F.
inline double best_rank_error(const Matrix& z, std::size_t k) {
    auto s = squared_singular_values(z);
    double tail = 0.0;
    for (std::size_t i = k; i < s.size(); ++i) tail += s[i];
    return std::sqrt(tail);
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Matrix a, std::vector<double> b) {
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return x;
}

/// Least squares via the normal equations D^T D c = D^T x.
inline std::vector<double> least_squares(const Matrix& d, const std::vector<double>& x) {
    auto dt = transpose(d);
    auto gram = multiply(dt, d);
    std::vector<double> rhs(dt.size(), 0.0);
    for (std::size_t i = 0; i < dt.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) rhs[i] += dt[i][j] * x[j];
    return solve(gram, rhs);
}

/// Random graph with at most `max_nodes` nodes; weights uniform in [0.5, 2]
/// when weighted, otherwise 1.
inline mcgraph::Graph random_graph(mcgraph::Rng& rng, std::size_t min_nodes, std::size_t max_nodes, bool directed,
                                   bool weighted, double density = -1.0) {
    const std::size_t n = min_nodes + rng.index(max_nodes - min_nodes + 1);
    const double p = density > 0.0 ? density : rng.uniform(0.15, 0.7);
    std::vector<mcgraph::EdgeInput> edges;
    for (mcgraph::NodeId i = 0; i < n; ++i) {
        for (mcgraph::NodeId j = directed ? 0 : i + 1; j < n; ++j) {
            if (i == j || !rng.bernoulli(p)) continue;
            edges.push_back({i, j, weighted ? rng.uniform(0.5, 2.0) : 1.0});
        }
    }
    return mcgraph::build_graph(edges, directed, n);
}

} // namespace oracle
