#pragma once

// Symmetrized weights, graph Laplacian, and the eigenspace of its smallest
// nonzero eigenvalue (the Fiedler space). The Laplacian is block diagonal over
// connected components, so each component is solved on its own: densely when
// small, with a restarted Lanczos iteration otherwise.

#include "mcgraph/error.hpp"
#include "mcgraph/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace mcgraph {

/// Undirected view of a graph with weights (W + W^T) / 2.
struct SymmetricAdjacency {
    std::vector<std::vector<NodeId>> neighbors;  // sorted
    std::vector<std::vector<double>> weights;

    std::size_t node_count() const noexcept { return neighbors.size(); }

    double weighted_degree(NodeId i) const {
        double s = 0.0;
        for (double w : weights[i]) s += w;
        return s;
    }
};

inline SymmetricAdjacency symmetrize(const Graph& g) {
    const std::size_t n = g.node_count();
    SymmetricAdjacency s{std::vector<std::vector<NodeId>>(n), std::vector<std::vector<double>>(n)};
    for (NodeId i = 0; i < n; ++i) {
        auto out = g.out_neighbors(i);
        auto out_w = g.out_weights(i);
        if (!g.is_directed()) {
            s.neighbors[i].assign(out.begin(), out.end());
            s.weights[i].assign(out_w.begin(), out_w.end());
            continue;
        }
        auto in = g.in_neighbors(i);
        auto in_w = g.in_weights(i);
        std::size_t a = 0, b = 0;
        while (a < out.size() || b < in.size()) {
            if (b == in.size() || (a < out.size() && out[a] < in[b])) {
                s.neighbors[i].push_back(out[a]);
                s.weights[i].push_back(0.5 * out_w[a++]);
            } else if (a == out.size() || in[b] < out[a]) {
                s.neighbors[i].push_back(in[b]);
                s.weights[i].push_back(0.5 * in_w[b++]);
            } else {
                s.neighbors[i].push_back(out[a]);
                s.weights[i].push_back(0.5 * (out_w[a++] + in_w[b++]));
            }
        }
    }
    return s;
}

/// Orthonormal basis of the eigenspace belonging to the smallest nonzero
/// Laplacian eigenvalue. Vectors have full length n and are zero outside the
/// components that attain the eigenvalue.
struct FiedlerSpace {
    double eigenvalue = 0.0;
    std::vector<Eigen::VectorXd> vectors;
};

struct FiedlerOptions {
    /// Eigenvalues below zero_tolerance * (Gershgorin bound) count as zero.
    double zero_tolerance = 1e-8;
    /// Eigenvalues this close (relative to the same bound) are one eigenspace.
    double cluster_tolerance = 1e-10;
    /// Components larger than this use the Lanczos solver.
    std::size_t dense_limit = 2000;
    std::size_t lanczos_steps = 120;
    std::size_t lanczos_restarts = 200;
};

namespace detail {

// Components of the positive-weight symmetrized graph.
inline std::vector<std::vector<NodeId>> positive_components(const SymmetricAdjacency& s) {
    const std::size_t n = s.node_count();
    std::vector<bool> seen(n, false);
    std::vector<std::vector<NodeId>> comps;
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < n; ++start) {
        if (seen[start]) continue;
        comps.emplace_back();
        seen[start] = true;
        stack.push_back(start);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            comps.back().push_back(u);
            for (std::size_t k = 0; k < s.neighbors[u].size(); ++k) {
                NodeId v = s.neighbors[u][k];
                if (s.weights[u][k] > 0.0 && !seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        std::sort(comps.back().begin(), comps.back().end());
    }
    return comps;
}

struct ComponentEigen {
    std::vector<double> values;
    std::vector<Eigen::VectorXd> vectors;  // local coordinates
};

inline ComponentEigen dense_component_fiedler(const SymmetricAdjacency& s, const std::vector<NodeId>& members,
                                              std::vector<std::size_t>& local, double zero_tol, double cluster_tol) {
    const auto m = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        NodeId u = members[static_cast<std::size_t>(a)];
        for (std::size_t k = 0; k < s.neighbors[u].size(); ++k) {
            const double w = s.weights[u][k];
            const auto b = static_cast<Eigen::Index>(local[s.neighbors[u][k]]);
            lap(a, b) -= w;
            lap(a, a) += w;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
    const auto& vals = eig.eigenvalues();
    Eigen::Index first = 0;
    while (first < m && vals(first) <= zero_tol) ++first;
    ComponentEigen out;
    for (Eigen::Index k = first; k < m && vals(k) - vals(first) <= cluster_tol; ++k) {
        out.values.push_back(vals(k));
        out.vectors.push_back(eig.eigenvectors().col(k));
    }
    return out;
}

inline ComponentEigen lanczos_component_fiedler(const SymmetricAdjacency& s, const std::vector<NodeId>& members,
                                                std::vector<std::size_t>& local, double scale,
                                                const FiedlerOptions& opts) {
    const auto m = static_cast<Eigen::Index>(members.size());
    auto apply = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            NodeId u = members[static_cast<std::size_t>(a)];
            double acc = 0.0;
            for (std::size_t k = 0; k < s.neighbors[u].size(); ++k) {
                acc += s.weights[u][k] * (x(a) - x(static_cast<Eigen::Index>(local[s.neighbors[u][k]])));
            }
            y(a) = acc;
        }
        return y;
    };
    // The constant vector spans the null space of a connected component.
    auto deflate = [&](Eigen::VectorXd& x) { x.array() -= x.mean(); };

    Eigen::VectorXd start(m);
    for (Eigen::Index a = 0; a < m; ++a) start(a) = std::sin(1.0 + 0.7 * static_cast<double>(a)) + 1e-3 * static_cast<double>(a % 7);
    deflate(start);
    start.normalize();

    const Eigen::Index steps = std::min<Eigen::Index>(static_cast<Eigen::Index>(opts.lanczos_steps), m - 1);
    const double residual_tol = 1e-9 * scale;
    for (std::size_t restart = 0; restart < opts.lanczos_restarts; ++restart) {
        Eigen::MatrixXd basis(m, steps);
        Eigen::VectorXd alpha(steps), beta(steps);
        basis.col(0) = start;
        Eigen::Index used = steps;
        for (Eigen::Index j = 0; j < steps; ++j) {
            Eigen::VectorXd w = apply(basis.col(j));
            deflate(w);
            alpha(j) = basis.col(j).dot(w);
            for (int pass = 0; pass < 2; ++pass) {
                w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
                // rounding reintroduces the constant direction; it dominates once w is tiny
                deflate(w);
            }
            beta(j) = w.norm();
            if (j + 1 == steps) break;
            if (beta(j) <= 1e-10 * scale) {
                used = j + 1;
                break;
            }
            basis.col(j + 1) = w / beta(j);
        }
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(used, used);
        for (Eigen::Index j = 0; j < used; ++j) {
            tri(j, j) = alpha(j);
            if (j + 1 < used) tri(j, j + 1) = tri(j + 1, j) = beta(j);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
        Eigen::VectorXd ritz = basis.leftCols(used) * eig.eigenvectors().col(0);
        deflate(ritz);
        ritz.normalize();
        const double theta = ritz.dot(apply(ritz));
        const double residual = (apply(ritz) - theta * ritz).norm();
        if (residual <= residual_tol || used < steps) {
            return {{theta}, {ritz}};
        }
        start = ritz;
    }
    throw Error(ErrorCode::no_convergence, "Lanczos iteration for the Fiedler vector did not converge on a component of " +
                                               std::to_string(members.size()) + " nodes");
}

} // namespace detail

inline FiedlerSpace fiedler_space(const SymmetricAdjacency& s, const FiedlerOptions& opts = {}) {
    const std::size_t n = s.node_count();
    double bound = 0.0;
    for (NodeId i = 0; i < n; ++i) bound = std::max(bound, 2.0 * s.weighted_degree(i));
    if (bound <= 0.0) throw Error(ErrorCode::all_eigenvalues_zero, "graph Laplacian is zero (no weighted edges)");
    const double zero_tol = opts.zero_tolerance * bound;
    const double cluster_tol = opts.cluster_tolerance * bound;

    struct Candidate {
        const std::vector<NodeId>* members;
        detail::ComponentEigen eig;
    };
    auto comps = detail::positive_components(s);
    std::vector<std::size_t> local(n, 0);
    std::vector<Candidate> candidates;
    for (const auto& members : comps) {
        if (members.size() < 2) continue;
        for (std::size_t a = 0; a < members.size(); ++a) local[members[a]] = a;
        auto eig = members.size() <= opts.dense_limit
                       ? detail::dense_component_fiedler(s, members, local, zero_tol, cluster_tol)
                       : detail::lanczos_component_fiedler(s, members, local, bound, opts);
        if (!eig.values.empty()) candidates.push_back({&members, std::move(eig)});
    }
    if (candidates.empty()) throw Error(ErrorCode::all_eigenvalues_zero, "no nonzero Laplacian eigenvalue");

    double lowest = infinity;
    for (const auto& c : candidates) lowest = std::min(lowest, c.eig.values.front());

    FiedlerSpace out;
    double sum = 0.0;
    for (const auto& c : candidates) {
        for (std::size_t k = 0; k < c.eig.values.size(); ++k) {
            if (c.eig.values[k] - lowest > cluster_tol) continue;
            Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
            for (std::size_t a = 0; a < c.members->size(); ++a) {
                full(static_cast<Eigen::Index>((*c.members)[a])) = c.eig.vectors[k](static_cast<Eigen::Index>(a));
            }
            out.vectors.push_back(std::move(full));
            sum += c.eig.values[k];
        }
    }
    out.eigenvalue = sum / static_cast<double>(out.vectors.size());
    return out;
}

} // namespace mcgraph
