#pragma once

// Single-graph and ensemble pipelines: features -> MC-GPCA -> SDS, and
// SDS profiles -> K-SVD -> K-means.

#include "mcgraph/dictionary.hpp"
#include "mcgraph/features.hpp"
#include "mcgraph/graph.hpp"
#include "mcgraph/spectral.hpp"

#include <string>
#include <vector>

namespace mcgraph {

struct GraphAnalysis {
    FeatureMatrix features;
    PcaResult pca;
    std::vector<double> sds;
    double sds_statistic = 0.0;
};

inline GraphAnalysis analyze_graph(const Graph& g, const FeatureSpec& spec, Eigen::Index q,
                                   SdsReducer reducer = SdsReducer::mean()) {
    GraphAnalysis a;
    a.features = assemble(g, spec);
    a.pca = mc_gpca(a.features, q);
    a.sds = sds(g, a.pca);
    a.sds_statistic = a.sds.empty() ? 0.0 : graph_sds_statistic(a.sds, reducer);
    return a;
}

struct EnsembleOptions {
    std::size_t z = 300;
    EnsembleCentering centering = EnsembleCentering::column_mean;
    KsvdOptions ksvd;
    std::size_t clusters = 2;
    std::size_t kmeans_restarts = 100;
};

struct EnsembleAnalysis {
    EnsembleFeatures ensemble;
    DictionaryModel model;
    std::vector<std::size_t> labels;
};

inline EnsembleAnalysis analyze_ensemble(const std::vector<std::vector<double>>& sds_per_graph,
                                         const EnsembleOptions& opts) {
    EnsembleAnalysis out;
    out.ensemble = build_ensemble_matrix(sds_per_graph, opts.z, opts.centering);
    out.model = ksvd_train(out.ensemble, opts.ksvd);
    out.labels = classify_coefficients(out.model.coefficients, opts.clusters, opts.ksvd.seed, opts.kmeans_restarts);
    return out;
}

} // namespace mcgraph
