#pragma once

// MC-GDL: graph-ensemble dictionary learning. Each graph becomes one column
// of its z largest SDS values; K-SVD with OMP sparse coding factors the
// ensemble matrix, and K-means on the coefficients groups the graphs.

#include "mcgraph/error.hpp"
#include "mcgraph/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace mcgraph {

enum class EnsembleCentering {
    column_mean,  // subtract each column's own mean from that column
    mean_column,  // subtract the mean column from every column
    none,
};

struct EnsembleFeatures {
    std::size_t z = 0;
    std::size_t graph_count = 0;
    Eigen::MatrixXd raw;     // z x g, sorted descending, zero padded
    Eigen::MatrixXd matrix;  // z x g after centering
    EnsembleCentering centering = EnsembleCentering::column_mean;
    bool centered = false;
};

/// Column l holds the z largest scores of graph l in descending order (ties
/// by node index), zero-padded for graphs with fewer than z nodes, then
/// centered.
inline EnsembleFeatures build_ensemble_matrix(const std::vector<std::vector<double>>& sds_per_graph, std::size_t z,
                                              EnsembleCentering centering = EnsembleCentering::column_mean) {
    if (sds_per_graph.empty()) throw Error(ErrorCode::empty_input, "ensemble has no graphs");
    if (z == 0) throw Error(ErrorCode::invalid_argument, "z must be at least 1");
    EnsembleFeatures e;
    e.z = z;
    e.graph_count = sds_per_graph.size();
    e.raw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(e.graph_count));
    for (std::size_t l = 0; l < sds_per_graph.size(); ++l) {
        const auto& scores = sds_per_graph[l];
        std::vector<std::size_t> order(scores.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
        for (std::size_t r = 0; r < std::min(z, order.size()); ++r) {
            e.raw(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) = scores[order[r]];
        }
    }
    e.matrix = e.raw;
    switch (centering) {
    case EnsembleCentering::column_mean:
        e.matrix.rowwise() -= e.matrix.colwise().mean();
        break;
    case EnsembleCentering::mean_column:
        e.matrix.colwise() -= e.matrix.rowwise().mean();
        break;
    case EnsembleCentering::none:
        break;
    }
    e.centering = centering;
    e.centered = centering != EnsembleCentering::none;
    return e;
}

/// Orthogonal matching pursuit: greedily add the atom most correlated with the
/// residual (lowest index on ties), refit all selected coefficients by least
/// squares, stop after `sparsity` atoms or once the residual norm drops below
/// 1e-12.
inline Eigen::VectorXd omp_encode(const Eigen::MatrixXd& atoms, const Eigen::VectorXd& signal, std::size_t sparsity) {
    const Eigen::Index k = atoms.cols();
    if (atoms.rows() != signal.size()) {
        throw Error(ErrorCode::dimension_error, "signal length does not match atom length");
    }
    if (sparsity < 1 || static_cast<Eigen::Index>(sparsity) > k) {
        throw Error(ErrorCode::invalid_argument, "sparsity must lie in [1, number of atoms]");
    }
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(k);
    std::vector<Eigen::Index> selected;
    std::vector<bool> taken(static_cast<std::size_t>(k), false);
    Eigen::VectorXd residual = signal;
    Eigen::VectorXd local;
    while (selected.size() < sparsity && residual.norm() >= 1e-12) {
        const Eigen::VectorXd corr = atoms.transpose() * residual;
        Eigen::Index best = -1;
        double best_abs = 0.0;
        for (Eigen::Index a = 0; a < k; ++a) {
            if (taken[static_cast<std::size_t>(a)]) continue;
            if (std::abs(corr(a)) > best_abs) {
                best_abs = std::abs(corr(a));
                best = a;
            }
        }
        if (best < 0) break;  // residual orthogonal to every remaining atom
        selected.push_back(best);
        taken[static_cast<std::size_t>(best)] = true;

        Eigen::MatrixXd sub(atoms.rows(), static_cast<Eigen::Index>(selected.size()));
        for (std::size_t s = 0; s < selected.size(); ++s) sub.col(static_cast<Eigen::Index>(s)) = atoms.col(selected[s]);
        local = sub.completeOrthogonalDecomposition().solve(signal);
        residual = signal - sub * local;
    }
    for (std::size_t s = 0; s < selected.size(); ++s) coef(selected[s]) = local(static_cast<Eigen::Index>(s));
    return coef;
}

struct KsvdOptions {
    std::size_t atoms = 2;
    std::size_t sparsity = 2;
    std::size_t iterations = 20;
    std::uint64_t seed = default_seed;
    /// Stop early once a sweep improves the error by less than this.
    double min_improvement = 1e-10;
};

struct DictionaryModel {
    std::size_t z = 0;
    std::size_t atom_count = 0;
    std::size_t sparsity = 0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd atoms;         // z x K, unit columns
    Eigen::MatrixXd coefficients;  // K x g, at most `sparsity` nonzeros per column
    std::vector<double> training_log;  // ||Z - DC||_F after each sweep
    double final_error = 0.0;          // error of the reported coefficients
    bool degenerate = false;
    std::string note;
};

inline double representation_error(const Eigen::MatrixXd& z, const Eigen::MatrixXd& d, const Eigen::MatrixXd& c) {
    return (z - d * c).norm();
}

/// Flips v so that its largest-magnitude entry (first on ties) is positive.
/// Returns the sign applied.
inline double canonical_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > best + 1e-15) {
            best = std::abs(v(i));
            arg = i;
        }
    }
    if (v.size() > 0 && v(arg) < 0.0) {
        v *= -1.0;
        return -1.0;
    }
    return 1.0;
}

namespace detail {

// Re-encodes every column, keeping the previous code when OMP does worse.
inline void sparse_coding_step(const Eigen::MatrixXd& z, const Eigen::MatrixXd& d, Eigen::MatrixXd& c,
                               std::size_t sparsity) {
    for (Eigen::Index l = 0; l < z.cols(); ++l) {
        const Eigen::VectorXd candidate = omp_encode(d, z.col(l), sparsity);
        const double new_err = (z.col(l) - d * candidate).norm();
        const double old_err = (z.col(l) - d * c.col(l)).norm();
        if (new_err <= old_err) c.col(l) = candidate;
    }
}

inline Eigen::MatrixXd initial_dictionary(const Eigen::MatrixXd& z, std::size_t k, Rng& rng) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(z.cols()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    rng.shuffle(order);
    Eigen::MatrixXd d(z.rows(), static_cast<Eigen::Index>(k));
    Eigen::Index filled = 0;
    for (Eigen::Index l : order) {
        if (filled == static_cast<Eigen::Index>(k)) break;
        const double norm = z.col(l).norm();
        if (norm <= 1e-12) continue;
        Eigen::VectorXd atom = z.col(l) / norm;
        bool duplicate = false;
        for (Eigen::Index a = 0; a < filled; ++a) duplicate = duplicate || (d.col(a) - atom).norm() <= 1e-12;
        if (duplicate) continue;
        d.col(filled++) = atom;
    }
    // Fewer distinct nonzero columns than atoms: pad with random directions.
    while (filled < static_cast<Eigen::Index>(k)) {
        Eigen::VectorXd atom(z.rows());
        for (Eigen::Index i = 0; i < atom.size(); ++i) atom(i) = rng.normal();
        d.col(filled++) = atom.normalized();
    }
    return d;
}

} // namespace detail

/// K-SVD: alternate sparse coding of all columns with per-atom rank-1 updates
/// on the columns that use the atom. An unused atom is replaced by the
/// worst-represented column, normalized. The error log never increases.
inline DictionaryModel ksvd_train(const Eigen::MatrixXd& zmat, const KsvdOptions& opts) {
    const std::size_t k = opts.atoms;
    const std::size_t g = static_cast<std::size_t>(zmat.cols());
    if (g == 0 || zmat.rows() == 0) throw Error(ErrorCode::empty_input, "ensemble matrix is empty");
    if (k == 0) throw Error(ErrorCode::invalid_argument, "need at least one atom");
    if (opts.sparsity < 1 || opts.sparsity > k) {
        throw Error(ErrorCode::invalid_argument, "sparsity must lie in [1, atoms]");
    }

    DictionaryModel m;
    m.z = static_cast<std::size_t>(zmat.rows());
    m.atom_count = k;
    m.sparsity = opts.sparsity;
    m.seed = opts.seed;
    if (k > g) {
        m.degenerate = true;
        m.note = "more atoms (" + std::to_string(k) + ") than graphs (" + std::to_string(g) +
                 "); dictionary is likely degenerate";
    }

    Rng rng(opts.seed);
    Eigen::MatrixXd d = detail::initial_dictionary(zmat, k, rng);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(g));

    for (std::size_t sweep = 0; sweep < opts.iterations; ++sweep) {
        detail::sparse_coding_step(zmat, d, c, opts.sparsity);

        std::vector<bool> replaced_with(g, false);
        for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(k); ++a) {
            std::vector<Eigen::Index> users;
            for (Eigen::Index l = 0; l < c.cols(); ++l) {
                if (c(a, l) != 0.0) users.push_back(l);
            }
            if (users.empty()) {
                const Eigen::VectorXd col_err = (zmat - d * c).colwise().norm();
                Eigen::Index worst = -1;
                double worst_err = 0.0;
                for (Eigen::Index l = 0; l < col_err.size(); ++l) {
                    if (replaced_with[static_cast<std::size_t>(l)] || zmat.col(l).norm() <= 1e-12) continue;
                    if (col_err(l) > worst_err) {
                        worst_err = col_err(l);
                        worst = l;
                    }
                }
                if (worst >= 0) {
                    d.col(a) = zmat.col(worst).normalized();
                    replaced_with[static_cast<std::size_t>(worst)] = true;
                }
                continue;
            }
            const auto u = static_cast<Eigen::Index>(users.size());
            Eigen::MatrixXd residual(zmat.rows(), u);
            for (Eigen::Index t = 0; t < u; ++t) {
                const Eigen::Index l = users[static_cast<std::size_t>(t)];
                residual.col(t) = zmat.col(l) - d * c.col(l) + d.col(a) * c(a, l);
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const double sigma = svd.singularValues()(0);
            if (sigma <= 1e-300) {
                for (Eigen::Index l : users) c(a, l) = 0.0;
                continue;
            }
            Eigen::VectorXd atom = svd.matrixU().col(0);
            Eigen::VectorXd weights = svd.matrixV().col(0) * sigma;
            weights *= canonical_sign(atom);
            d.col(a) = atom;
            for (Eigen::Index t = 0; t < u; ++t) c(a, users[static_cast<std::size_t>(t)]) = weights(t);
        }

        const double err = representation_error(zmat, d, c);
        const bool stalled = !m.training_log.empty() && m.training_log.back() - err < opts.min_improvement;
        m.training_log.push_back(err);
        if (stalled) break;
    }

    // Reporting pass: re-encode every column against the final dictionary.
    detail::sparse_coding_step(zmat, d, c, opts.sparsity);

    // With S = K the sparsity cap never binds, so only span(D) is determined
    // and any basis of it fits equally well. Report the orthonormal basis of
    // principal directions of DC (largest first) so coefficients are not
    // sheared by an arbitrary, possibly near-parallel, pair of atoms.
    if (opts.sparsity == k && static_cast<std::size_t>(std::min(zmat.rows(), zmat.cols())) >= k) {
        const Eigen::MatrixXd fit = d * c;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(fit, Eigen::ComputeThinU);
        d = svd.matrixU().leftCols(static_cast<Eigen::Index>(k));
        for (Eigen::Index a = 0; a < d.cols(); ++a) canonical_sign(d.col(a));
        c = d.transpose() * fit;
    }
    m.atoms = std::move(d);
    m.coefficients = std::move(c);
    m.final_error = representation_error(zmat, m.atoms, m.coefficients);
    return m;
}

inline DictionaryModel ksvd_train(const EnsembleFeatures& e, const KsvdOptions& opts) {
    return ksvd_train(e.matrix, opts);
}

struct KMeansOptions {
    std::size_t restarts = 100;
    std::size_t max_iter = 300;
    std::uint64_t seed = default_seed;
};

struct Clustering {
    std::vector<std::size_t> labels;
    double inertia = 0.0;  // within-cluster sum of squares
};

namespace detail {

inline Clustering lloyd(const Eigen::MatrixXd& points, std::size_t clusters, Rng& rng, std::size_t max_iter) {
    const Eigen::Index g = points.cols();
    const auto kc = static_cast<Eigen::Index>(clusters);
    Eigen::MatrixXd centers(points.rows(), kc);

    // k-means++ seeding.
    centers.col(0) = points.col(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(g))));
    Eigen::VectorXd d2(g);
    for (Eigen::Index c = 1; c < kc; ++c) {
        for (Eigen::Index l = 0; l < g; ++l) {
            d2(l) = (centers.leftCols(c).colwise() - points.col(l)).colwise().squaredNorm().minCoeff();
        }
        const double total = d2.sum();
        Eigen::Index pick = g - 1;
        if (total <= 0.0) {
            pick = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(g)));
        } else {
            double target = rng.uniform() * total;
            for (Eigen::Index l = 0; l < g; ++l) {
                target -= d2(l);
                if (target < 0.0) {
                    pick = l;
                    break;
                }
            }
        }
        centers.col(c) = points.col(pick);
    }

    std::vector<std::size_t> labels(static_cast<std::size_t>(g), clusters);
    for (std::size_t it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (Eigen::Index l = 0; l < g; ++l) {
            Eigen::Index best = 0;
            (centers.colwise() - points.col(l)).colwise().squaredNorm().minCoeff(&best);
            if (labels[static_cast<std::size_t>(l)] != static_cast<std::size_t>(best)) {
                labels[static_cast<std::size_t>(l)] = static_cast<std::size_t>(best);
                changed = true;
            }
        }
        std::vector<std::size_t> sizes(clusters, 0);
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(points.rows(), kc);
        for (Eigen::Index l = 0; l < g; ++l) {
            sums.col(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(l)])) += points.col(l);
            ++sizes[labels[static_cast<std::size_t>(l)]];
        }
        for (Eigen::Index c = 0; c < kc; ++c) {
            if (sizes[static_cast<std::size_t>(c)] > 0) {
                centers.col(c) = sums.col(c) / static_cast<double>(sizes[static_cast<std::size_t>(c)]);
                continue;
            }
            // Empty cluster: move its center onto the point farthest from its own center.
            Eigen::Index far = 0;
            double far_d = -1.0;
            for (Eigen::Index l = 0; l < g; ++l) {
                const double dist =
                    (points.col(l) - centers.col(static_cast<Eigen::Index>(labels[static_cast<std::size_t>(l)])))
                        .squaredNorm();
                if (dist > far_d) {
                    far_d = dist;
                    far = l;
                }
            }
            centers.col(c) = points.col(far);
            changed = true;
        }
        if (!changed) break;
    }

    Clustering out{std::move(labels), 0.0};
    for (Eigen::Index l = 0; l < g; ++l) {
        out.inertia +=
            (points.col(l) - centers.col(static_cast<Eigen::Index>(out.labels[static_cast<std::size_t>(l)]))).squaredNorm();
    }
    return out;
}

} // namespace detail

/// K-means over the columns of `points` with k-means++ seeding and restarts;
/// the lowest-inertia run wins. Labels are renumbered by first appearance, so
/// column 0 is always in cluster 0.
inline Clustering kmeans(const Eigen::MatrixXd& points, std::size_t clusters, const KMeansOptions& opts = {}) {
    const auto g = static_cast<std::size_t>(points.cols());
    if (clusters == 0 || clusters > g) {
        throw Error(ErrorCode::dimension_error, "cannot form " + std::to_string(clusters) + " clusters from " +
                                                    std::to_string(g) + " points");
    }
    Rng rng(opts.seed);
    Clustering best{{}, std::numeric_limits<double>::infinity()};
    for (std::size_t r = 0; r < std::max<std::size_t>(1, opts.restarts); ++r) {
        auto run = detail::lloyd(points, clusters, rng, opts.max_iter);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    std::vector<std::size_t> remap(clusters, clusters);
    std::size_t next = 0;
    for (auto& label : best.labels) {
        if (remap[label] == clusters) remap[label] = next++;
        label = remap[label];
    }
    return best;
}

/// Cluster labels for the g coefficient columns.
inline std::vector<std::size_t> classify_coefficients(const Eigen::MatrixXd& coefficients, std::size_t clusters,
                                                      std::uint64_t seed = default_seed, std::size_t restarts = 100) {
    return kmeans(coefficients, clusters, {restarts, 300, seed}).labels;
}

} // namespace mcgraph
