#pragma once

// MC-GPCA: principal components of a centered feature matrix, and the
// Structural Difference Score built on the resulting node coordinates.

#include "mcgraph/error.hpp"
#include "mcgraph/features.hpp"
#include "mcgraph/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace mcgraph {

struct PcaResult {
    Eigen::MatrixXd basis;              // p x q, orthonormal columns
    Eigen::VectorXd singular_values;    // q, nonincreasing
    Eigen::MatrixXd coordinates;        // n x q, X * basis
    Eigen::VectorXd explained_variance_ratio;

    Eigen::Index components() const { return basis.cols(); }
};

struct PcaDiagnostics {
    double orthonormality_error = 0.0;  // max |B^T B - I|
    double variance_error = 0.0;        // |trace(Y^T Y) - sum sigma^2| / max(1, sum sigma^2)
    bool nonincreasing = true;
};

inline PcaDiagnostics diagnose(const PcaResult& r) {
    PcaDiagnostics d;
    const auto q = r.basis.cols();
    d.orthonormality_error =
        (r.basis.transpose() * r.basis - Eigen::MatrixXd::Identity(q, q)).cwiseAbs().maxCoeff();
    const double trace = r.coordinates.squaredNorm();
    const double sum_sq = r.singular_values.squaredNorm();
    d.variance_error = std::abs(trace - sum_sq) / std::max(1.0, sum_sq);
    for (Eigen::Index k = 1; k < r.singular_values.size(); ++k) {
        d.nonincreasing = d.nonincreasing && r.singular_values(k) <= r.singular_values(k - 1);
    }
    return d;
}

/// Top-q right singular vectors of x. Each basis column is signed so that its
/// largest-magnitude entry (first one on ties) is positive. q may exceed the
/// rank of x; the extra directions complete the orthonormal basis and carry
/// zero singular values.
inline PcaResult mc_gpca(const Eigen::MatrixXd& x, Eigen::Index q) {
    const Eigen::Index p = x.cols();
    if (q < 1 || q > p) {
        throw Error(ErrorCode::dimension_error, "requested " + std::to_string(q) + " components from " +
                                                    std::to_string(p) + " features (need 1 <= q <= p)");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();

    PcaResult r;
    r.basis = svd.matrixV().leftCols(q);
    r.singular_values = Eigen::VectorXd::Zero(q);
    const Eigen::Index have = std::min<Eigen::Index>(q, sv.size());
    r.singular_values.head(have) = sv.head(have);

    for (Eigen::Index c = 0; c < q; ++c) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            if (std::abs(r.basis(i, c)) > best + 1e-15) {
                best = std::abs(r.basis(i, c));
                arg = i;
            }
        }
        if (r.basis(arg, c) < 0.0) r.basis.col(c) *= -1.0;
    }
    r.coordinates = x * r.basis;

    const double total = sv.squaredNorm();
    r.explained_variance_ratio = Eigen::VectorXd::Zero(q);
    if (total > 0.0) r.explained_variance_ratio = r.singular_values.array().square() / total;

    const auto diag = diagnose(r);
    if (diag.orthonormality_error > 1e-10 || diag.variance_error > 1e-10 || !diag.nonincreasing) {
        throw Error(ErrorCode::no_convergence, "SVD result failed its orthonormality/variance checks");
    }
    return r;
}

inline PcaResult mc_gpca(const FeatureMatrix& x, Eigen::Index q) {
    if (!x.centered) throw Error(ErrorCode::invalid_argument, "feature matrix must be centered before PCA");
    return mc_gpca(x.matrix, q);
}

/// Per node: sum over in/out neighbors of the squared coordinate distance,
/// divided by (number of such neighbors + 1).
inline std::vector<double> sds(const Graph& g, const Eigen::MatrixXd& coordinates) {
    if (static_cast<std::size_t>(coordinates.rows()) != g.node_count()) {
        throw Error(ErrorCode::dimension_error, "coordinate rows (" + std::to_string(coordinates.rows()) +
                                                    ") do not match node count (" + std::to_string(g.node_count()) + ")");
    }
    std::vector<double> scores(g.node_count(), 0.0);
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const auto nb = g.neighbors(i);
        double sum = 0.0;
        for (NodeId j : nb) {
            sum += (coordinates.row(static_cast<Eigen::Index>(i)) - coordinates.row(static_cast<Eigen::Index>(j)))
                       .squaredNorm();
        }
        scores[i] = sum / static_cast<double>(nb.size() + 1);
    }
    return scores;
}

inline std::vector<double> sds(const Graph& g, const PcaResult& pca) { return sds(g, pca.coordinates); }

struct SdsReducer {
    enum class Kind { mean, max, top_k_mean } kind = Kind::mean;
    std::size_t k = 1;

    static SdsReducer mean() { return {Kind::mean, 1}; }
    static SdsReducer max() { return {Kind::max, 1}; }
    static SdsReducer top_k_mean(std::size_t k) { return {Kind::top_k_mean, k}; }

    /// "mean", "max" or "top:<k>".
    static SdsReducer parse(const std::string& text) {
        if (text == "mean") return mean();
        if (text == "max") return max();
        if (text.rfind("top:", 0) == 0) {
            std::size_t used = 0;
            unsigned long k = 0;
            try {
                k = std::stoul(text.substr(4), &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == text.size() - 4 && k > 0) return top_k_mean(k);
        }
        throw Error(ErrorCode::invalid_argument, "unknown SDS reducer '" + text + "' (mean, max, top:<k>)");
    }
};

/// One number summarizing a graph's SDS vector. top_k_mean with k > n uses all
/// scores.
inline double graph_sds_statistic(const std::vector<double>& scores, SdsReducer reducer = SdsReducer::mean()) {
    if (scores.empty()) throw Error(ErrorCode::empty_input, "graph SDS statistic of an empty score vector");
    switch (reducer.kind) {
    case SdsReducer::Kind::max:
        return *std::max_element(scores.begin(), scores.end());
    case SdsReducer::Kind::top_k_mean: {
        if (reducer.k == 0) throw Error(ErrorCode::dimension_error, "top_k_mean needs k >= 1");
        std::vector<double> sorted = scores;
        const std::size_t k = std::min(reducer.k, sorted.size());
        std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end(),
                          std::greater<>());
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += sorted[i];
        return s / static_cast<double>(k);
    }
    case SdsReducer::Kind::mean:
        break;
    }
    double s = 0.0;
    for (double v : scores) s += v;
    return s / static_cast<double>(scores.size());
}

} // namespace mcgraph
