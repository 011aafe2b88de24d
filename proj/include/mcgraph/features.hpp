#pragma once

// Multi-centrality feature matrix: one row per node, one column per
// structural feature (walk statistics, centralities, distances to reference
// nodes), each column scaled to unit norm and then mean-centered.

#include "mcgraph/centrality.hpp"
#include "mcgraph/error.hpp"
#include "mcgraph/graph.hpp"
#include "mcgraph/walk_stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace mcgraph {

enum class ReferenceSelection { max_degree, explicit_list };

enum class ReferenceOrientation {
    node_to_reference,  // follow edges from the node towards the reference
    reference_to_node,
};

struct FeatureSpec {
    std::size_t max_hops = 20;
    std::vector<Centrality> centralities{all_centralities.begin(), all_centralities.end()};
    std::size_t reference_count = 10;
    ReferenceSelection reference_selection = ReferenceSelection::max_degree;
    std::vector<NodeId> explicit_references;
    PathMetric distance_metric = PathMetric::hop;
    ReferenceOrientation orientation = ReferenceOrientation::node_to_reference;
    /// Drop columns the feasibility table marks unusable for this graph type.
    bool strict_feasibility = false;
    WalkOptions walks;
    CentralityOptions centrality;

    std::size_t references() const {
        return reference_selection == ReferenceSelection::explicit_list ? explicit_references.size() : reference_count;
    }

    /// Column count before any strict-mode drops: 2H + |centralities| + r.
    std::size_t column_count() const { return 2 * max_hops + centralities.size() + references(); }
};

struct FeatureMatrix {
    Eigen::MatrixXd matrix;
    std::vector<std::string> column_names;
    std::vector<double> column_norms;  // L2 norms before normalization
    std::vector<std::string> dropped_columns;
    bool centered = false;

    Eigen::Index rows() const { return matrix.rows(); }
    Eigen::Index cols() const { return matrix.cols(); }
};

/// The r nodes of largest total degree, ties broken by smaller index.
inline std::vector<NodeId> select_reference_nodes(const Graph& g, std::size_t r) {
    if (r > g.node_count()) {
        throw Error(ErrorCode::too_many_references, "requested " + std::to_string(r) + " reference nodes but the graph has " +
                                                        std::to_string(g.node_count()) + " nodes");
    }
    auto deg = degree_vectors(g).total_degree;
    std::vector<NodeId> order(g.node_count());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return deg[a] > deg[b]; });
    order.resize(r);
    return order;
}

/// Column j: shortest-path distance between each node and refs[j]. Unreachable
/// entries are replaced by twice the largest finite distance in the column (or
/// by 1 when that maximum is 0).
inline Eigen::MatrixXd reference_distance_features(const Graph& g, const std::vector<NodeId>& refs, PathMetric metric,
                                                   ReferenceOrientation orientation =
                                                       ReferenceOrientation::node_to_reference) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd out(n, static_cast<Eigen::Index>(refs.size()));
    // Distances *to* the reference are distances *from* it along reversed edges.
    const Traversal traversal =
        orientation == ReferenceOrientation::node_to_reference ? Traversal::incoming : Traversal::outgoing;
    for (std::size_t j = 0; j < refs.size(); ++j) {
        if (refs[j] >= g.node_count()) {
            throw Error(ErrorCode::invalid_argument, "reference node " + std::to_string(refs[j]) + " out of range");
        }
        auto paths = shortest_paths(g, refs[j], metric, traversal);
        double far = 0.0;
        for (double d : paths.dist) {
            if (std::isfinite(d)) far = std::max(far, d);
        }
        const double cap = far > 0.0 ? 2.0 * far : 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = paths.dist[static_cast<std::size_t>(i)];
            out(i, static_cast<Eigen::Index>(j)) = std::isfinite(d) ? d : cap;
        }
    }
    return out;
}

/// Scales every nonzero column to unit L2 norm and returns the original norms.
inline std::vector<double> normalize_columns(Eigen::MatrixXd& x) {
    std::vector<double> norms(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double norm = x.col(c).norm();
        norms[static_cast<std::size_t>(c)] = norm;
        if (norm > 0.0) x.col(c) /= norm;
    }
    return norms;
}

/// Subtracts the mean row from every row, leaving zero-sum columns.
inline void center_columns(Eigen::MatrixXd& x) {
    if (x.rows() == 0) return;
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;
}

namespace detail {

inline void append_column(FeatureMatrix& fm, std::vector<Eigen::VectorXd>& cols, std::string name,
                          Eigen::VectorXd values) {
    fm.column_names.push_back(std::move(name));
    cols.push_back(std::move(values));
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace detail

/// Extracts, normalizes and centers the feature matrix. Columns are ordered
/// [walk counts h=1..H | walk weight totals h=1..H | centralities in enum order
/// | reference distances].
inline FeatureMatrix assemble(const Graph& g, const FeatureSpec& spec) {
    if (spec.max_hops == 0) throw Error(ErrorCode::invalid_argument, "max_hops must be at least 1");
    const auto traits = GraphTraits::of(g);
    const auto n = static_cast<Eigen::Index>(g.node_count());

    std::vector<NodeId> refs = spec.reference_selection == ReferenceSelection::explicit_list
                                   ? spec.explicit_references
                                   : select_reference_nodes(g, spec.reference_count);

    FeatureMatrix fm;
    std::vector<Eigen::VectorXd> cols;

    const auto walks = walk_statistics(g, spec.max_hops, spec.walks);
    for (std::size_t h = 0; h < spec.max_hops; ++h) {
        detail::append_column(fm, cols, "walk_count_h" + std::to_string(h + 1), detail::to_eigen(walks.counts[h]));
    }
    for (std::size_t h = 0; h < spec.max_hops; ++h) {
        detail::append_column(fm, cols, "walk_weight_h" + std::to_string(h + 1),
                              detail::to_eigen(walks.weight_totals[h]));
    }

    std::vector<Centrality> measures = spec.centralities;
    std::sort(measures.begin(), measures.end());
    measures.erase(std::unique(measures.begin(), measures.end()), measures.end());
    for (auto c : measures) {
        if (spec.strict_feasibility && !feasible(c, traits)) {
            fm.dropped_columns.emplace_back(to_string(c));
            continue;
        }
        auto cv = compute_centrality(g, c, spec.centrality);
        detail::append_column(fm, cols, std::string(to_string(c)), detail::to_eigen(cv.values));
    }

    if (!refs.empty()) {
        const bool keep = !spec.strict_feasibility || distance_feasible(traits);
        if (keep) {
            Eigen::MatrixXd dist = reference_distance_features(g, refs, spec.distance_metric, spec.orientation);
            for (std::size_t j = 0; j < refs.size(); ++j) {
                detail::append_column(fm, cols, "ref_dist_" + g.label(refs[j]), dist.col(static_cast<Eigen::Index>(j)));
            }
        } else {
            for (NodeId r : refs) fm.dropped_columns.push_back("ref_dist_" + g.label(r));
        }
    }

    fm.matrix.resize(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (!cols[c].allFinite()) {
            throw Error(ErrorCode::non_finite_feature, "feature column '" + fm.column_names[c] + "' has non-finite entries");
        }
        fm.matrix.col(static_cast<Eigen::Index>(c)) = cols[c];
    }
    fm.column_norms = normalize_columns(fm.matrix);
    center_columns(fm.matrix);
    fm.centered = true;
    return fm;
}

} // namespace mcgraph
