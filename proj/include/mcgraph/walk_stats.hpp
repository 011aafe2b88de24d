#pragma once

// Number and total weight of h-hop walks leaving each node, computed with one
// sparse matrix-vector product per hop.

#include "mcgraph/error.hpp"
#include "mcgraph/graph.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace mcgraph {

/// Walk counts are doubles; beyond this they stop being exact integers.
inline constexpr double walk_count_exact_limit = 9007199254740992.0;  // 2^53

struct WalkOptions {
    /// Raise CountOverflow once a count passes 2^53. When false only
    /// non-finite values are rejected.
    bool require_exact = true;
};

struct WalkStatistics {
    std::size_t max_hops = 0;
    std::vector<std::vector<double>> counts;         // counts[h-1][i] = a^(h)_i
    std::vector<std::vector<double>> weight_totals;  // weight_totals[h-1][i] = w^(h)_i
};

namespace detail {

// y = A x (binary adjacency) and y += W x, straight from the CSR rows.
inline std::vector<double> adjacency_times(const Graph& g, const std::vector<double>& x) {
    std::vector<double> y(g.node_count(), 0.0);
    for (NodeId i = 0; i < g.node_count(); ++i) {
        double s = 0.0;
        for (NodeId j : g.out_neighbors(i)) s += x[j];
        y[i] = s;
    }
    return y;
}

inline void add_weight_times(const Graph& g, const std::vector<double>& x, std::vector<double>& y) {
    for (NodeId i = 0; i < g.node_count(); ++i) {
        auto nb = g.out_neighbors(i);
        auto w = g.out_weights(i);
        double s = 0.0;
        for (std::size_t k = 0; k < nb.size(); ++k) s += w[k] * x[nb[k]];
        y[i] += s;
    }
}

inline void check_walk_values(const std::vector<double>& v, std::size_t hop, const WalkOptions& opts,
                              bool is_count) {
    for (double x : v) {
        if (!std::isfinite(x) || (opts.require_exact && is_count && x > walk_count_exact_limit)) {
            throw Error(ErrorCode::count_overflow,
                        std::string(is_count ? "walk count" : "walk weight") + " at hop " + std::to_string(hop) +
                            " exceeds the representable range; lower max_hops");
        }
    }
}

} // namespace detail

/// a^(1) = A 1, a^(h+1) = A a^(h).
inline std::vector<std::vector<double>> walk_counts(const Graph& g, std::size_t max_hops,
                                                    const WalkOptions& opts = {}) {
    if (max_hops == 0) throw Error(ErrorCode::invalid_argument, "max_hops must be at least 1");
    std::vector<std::vector<double>> counts;
    counts.reserve(max_hops);
    counts.push_back(detail::adjacency_times(g, std::vector<double>(g.node_count(), 1.0)));
    detail::check_walk_values(counts.back(), 1, opts, true);
    for (std::size_t h = 1; h < max_hops; ++h) {
        counts.push_back(detail::adjacency_times(g, counts.back()));
        detail::check_walk_values(counts.back(), h + 1, opts, true);
    }
    return counts;
}

/// w^(1) = W 1, w^(h+1) = W a^(h) + A w^(h), given a^(1)..a^(H-1).
inline std::vector<std::vector<double>> walk_weight_totals(const Graph& g,
                                                           const std::vector<std::vector<double>>& counts,
                                                           std::size_t max_hops, const WalkOptions& opts = {}) {
    if (max_hops == 0) throw Error(ErrorCode::invalid_argument, "max_hops must be at least 1");
    if (counts.size() + 1 < max_hops) throw Error(ErrorCode::invalid_argument, "not enough walk counts supplied");
    std::vector<std::vector<double>> totals;
    totals.reserve(max_hops);
    std::vector<double> first(g.node_count(), 0.0);
    detail::add_weight_times(g, std::vector<double>(g.node_count(), 1.0), first);
    totals.push_back(std::move(first));
    detail::check_walk_values(totals.back(), 1, opts, false);
    for (std::size_t h = 1; h < max_hops; ++h) {
        auto next = detail::adjacency_times(g, totals.back());
        detail::add_weight_times(g, counts[h - 1], next);
        totals.push_back(std::move(next));
        detail::check_walk_values(totals.back(), h + 1, opts, false);
    }
    return totals;
}

inline std::vector<std::vector<double>> walk_weight_totals(const Graph& g, std::size_t max_hops,
                                                           const WalkOptions& opts = {}) {
    auto counts = walk_counts(g, max_hops, opts);
    return walk_weight_totals(g, counts, max_hops, opts);
}

inline WalkStatistics walk_statistics(const Graph& g, std::size_t max_hops, const WalkOptions& opts = {}) {
    WalkStatistics s;
    s.max_hops = max_hops;
    s.counts = walk_counts(g, max_hops, opts);
    s.weight_totals = walk_weight_totals(g, s.counts, max_hops, opts);
    return s;
}

} // namespace mcgraph
