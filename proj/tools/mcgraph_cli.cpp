// mcgraph: command-line front end.
//
//   mcgraph features  --input g.txt --out dir
//   mcgraph gpca-sds  --input-dir days/ --q 2 --out dir
//   mcgraph gdl       --input-dir days/ --z 300 --atoms 2 --sparsity 2 --out dir
//   mcgraph demo
//
// Exit codes: 0 ok, 2 usage / input, 3 data, 4 numerical.

#include "mcgraph/mcgraph.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mcgraph;

namespace {

struct Config {
    std::vector<std::string> inputs;
    std::string input_dir;
    bool directed = false;
    std::size_t max_hops = 20;
    std::string centralities = "all";
    std::size_t refs = 10;
    std::string metric;
    bool strict = false;
    bool inexact_walks = false;
    Eigen::Index q = 2;
    std::string reducer = "mean";
    std::size_t z = 300;
    std::size_t atoms = 2;
    std::size_t sparsity = 2;
    std::size_t iters = 20;
    std::size_t clusters = 2;
    std::uint64_t seed = default_seed;
    std::string out = ".";
    std::string format = "csv";
};

struct Input {
    std::string name;  // file stem, used for output names
    std::string path;
    Graph graph;
};

PathMetric parse_metric(const std::string& s) {
    if (s == "hop") return PathMetric::hop;
    if (s == "weighted") return PathMetric::weighted;
    if (s == "inverse") return PathMetric::inverse_weighted;
    throw Error(ErrorCode::invalid_argument, "unknown metric '" + s + "' (hop, weighted, inverse)");
}

std::vector<Centrality> parse_centrality_list(const std::string& text) {
    if (text == "all") return {all_centralities.begin(), all_centralities.end()};
    std::vector<Centrality> out;
    if (text == "none" || text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_centrality(item));
    }
    return out;
}

FeatureSpec feature_spec(const Config& c) {
    if (c.max_hops == 0) throw Error(ErrorCode::invalid_argument, "--max-hops must be at least 1");
    FeatureSpec s;
    s.max_hops = c.max_hops;
    s.centralities = parse_centrality_list(c.centralities);
    s.reference_count = c.refs;
    if (!c.metric.empty()) {
        s.distance_metric = parse_metric(c.metric);
        s.centrality.path_metric = s.distance_metric;
    }
    s.strict_feasibility = c.strict;
    s.walks.require_exact = !c.inexact_walks;
    return s;
}

std::vector<std::string> input_paths(const Config& c) {
    std::vector<std::string> paths = c.inputs;
    if (!c.input_dir.empty()) {
        if (!fs::is_directory(c.input_dir)) {
            throw Error(ErrorCode::invalid_argument, "input directory not found: " + c.input_dir);
        }
        std::vector<std::string> found;
        for (const auto& entry : fs::directory_iterator(c.input_dir)) {
            if (!entry.is_regular_file()) continue;
            if (entry.path().filename().string().front() == '.') continue;
            found.push_back(entry.path().string());
        }
        std::sort(found.begin(), found.end());
        paths.insert(paths.end(), found.begin(), found.end());
    }
    if (paths.empty()) throw Error(ErrorCode::invalid_argument, "no input graphs (use --input or --input-dir)");
    return paths;
}

std::vector<Input> load_inputs(const Config& c) {
    std::vector<Input> out;
    for (const auto& p : input_paths(c)) {
        if (!fs::exists(p)) throw Error(ErrorCode::invalid_argument, "input file not found: " + p);
        out.push_back({fs::path(p).stem().string(), p, read_edge_list(p, c.directed)});
    }
    return out;
}

void prepare_output(const Config& c) {
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec || !fs::is_directory(c.out)) throw Error(ErrorCode::invalid_argument, "cannot create output directory " + c.out);
}

/// Rejects settings that would fail for every graph before any work is done.
void validate_common(const Config& c, const FeatureSpec& spec, const std::vector<Input>& inputs) {
    for (const auto& in : inputs) {
        if (spec.reference_count > in.graph.node_count()) {
            throw Error(ErrorCode::too_many_references, in.path + ": --refs " + std::to_string(spec.reference_count) +
                                                            " exceeds its " + std::to_string(in.graph.node_count()) +
                                                            " nodes");
        }
    }
    parse_output_format(c.format);
}

void validate_q(const Config& c, const FeatureSpec& spec) {
    const auto p = static_cast<Eigen::Index>(spec.column_count());
    if (c.q < 1 || c.q > p) {
        throw Error(ErrorCode::dimension_error, "--q " + std::to_string(c.q) + " must lie in [1, " + std::to_string(p) +
                                                    "] for this feature configuration");
    }
}

fs::path out_path(const Config& c, const std::string& name) { return fs::path(c.out) / name; }

int cmd_features(const Config& c) {
    const auto spec = feature_spec(c);
    auto inputs = load_inputs(c);
    validate_common(c, spec, inputs);
    const auto fmt = parse_output_format(c.format);

    std::vector<std::pair<fs::path, std::string>> files;
    for (const auto& in : inputs) {
        auto fm = assemble(in.graph, spec);
        files.emplace_back(out_path(c, in.name + ".features" + extension(fmt)), render(feature_table(in.graph, fm), fmt));
        for (const auto& d : fm.dropped_columns) std::cerr << in.path << ": dropped infeasible column " << d << "\n";
    }
    prepare_output(c);
    for (const auto& [path, text] : files) write_file_atomic(path, text);
    return 0;
}

std::vector<GraphAnalysis> analyze_all(const Config& c, const FeatureSpec& spec, const std::vector<Input>& inputs) {
    const auto reducer = SdsReducer::parse(c.reducer);
    std::vector<GraphAnalysis> out;
    for (const auto& in : inputs) {
        try {
            out.push_back(analyze_graph(in.graph, spec, c.q, reducer));
        } catch (const Error& e) {
            throw Error(e.code(), in.path + ": " + e.what());
        }
    }
    return out;
}

int cmd_gpca_sds(const Config& c) {
    const auto spec = feature_spec(c);
    validate_q(c, spec);
    SdsReducer::parse(c.reducer);
    auto inputs = load_inputs(c);
    validate_common(c, spec, inputs);
    const auto fmt = parse_output_format(c.format);

    auto results = analyze_all(c, spec, inputs);
    std::vector<std::pair<fs::path, std::string>> files;
    Table summary;
    summary.header = {"graph", "nodes", "arcs", "features", "sds_statistic"};
    for (Eigen::Index k = 0; k < c.q; ++k) summary.header.push_back("explained_pc" + std::to_string(k + 1));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& in = inputs[i];
        const auto& r = results[i];
        files.emplace_back(out_path(c, in.name + ".gpca" + extension(fmt)),
                           render(coordinate_table(in.graph, r.pca, r.sds), fmt));
        std::vector<Cell> row{in.name, static_cast<std::int64_t>(in.graph.node_count()),
                              static_cast<std::int64_t>(in.graph.arc_count()),
                              static_cast<std::int64_t>(r.features.cols()), r.sds_statistic};
        for (Eigen::Index k = 0; k < c.q; ++k) row.emplace_back(r.pca.explained_variance_ratio(k));
        summary.rows.push_back(std::move(row));
    }
    files.emplace_back(out_path(c, "summary" + extension(fmt)), render(summary, fmt));
    prepare_output(c);
    for (const auto& [path, text] : files) write_file_atomic(path, text);
    return 0;
}

int cmd_gdl(const Config& c) {
    const auto spec = feature_spec(c);
    validate_q(c, spec);
    SdsReducer::parse(c.reducer);
    if (c.z == 0) throw Error(ErrorCode::invalid_argument, "--z must be at least 1");
    if (c.atoms == 0 || c.sparsity == 0 || c.sparsity > c.atoms) {
        throw Error(ErrorCode::invalid_argument, "need 1 <= --sparsity <= --atoms");
    }
    auto inputs = load_inputs(c);
    validate_common(c, spec, inputs);
    if (c.clusters == 0 || c.clusters > inputs.size()) {
        throw Error(ErrorCode::dimension_error, "--clusters " + std::to_string(c.clusters) + " needs at least that many graphs (have " +
                                                    std::to_string(inputs.size()) + ")");
    }
    const auto fmt = parse_output_format(c.format);

    auto results = analyze_all(c, spec, inputs);
    std::vector<std::vector<double>> profiles;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        profiles.push_back(results[i].sds);
        names.push_back(inputs[i].name);
    }
    EnsembleOptions eo;
    eo.z = c.z;
    eo.ksvd = {c.atoms, c.sparsity, c.iters, c.seed};
    eo.clusters = c.clusters;
    auto ens = analyze_ensemble(profiles, eo);
    if (ens.model.degenerate) std::cerr << "warning: " << ens.model.note << "\n";

    Table labels;
    labels.header = {"graph", "label", "sds_statistic"};
    for (std::size_t a = 0; a < c.atoms; ++a) labels.header.push_back("coef" + std::to_string(a + 1));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        std::vector<Cell> row{names[i], static_cast<std::int64_t>(ens.labels[i]), results[i].sds_statistic};
        for (std::size_t a = 0; a < c.atoms; ++a) {
            row.emplace_back(ens.model.coefficients(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)));
        }
        labels.rows.push_back(std::move(row));
    }
    prepare_output(c);
    write_file_atomic(out_path(c, "model.json"), model_to_json(ens.model, names).dump(2) + "\n");
    write_file_atomic(out_path(c, "labels" + extension(fmt)), render(labels, fmt));
    return 0;
}

// Demo ------------------------------------------------------------------

void print_rows(const std::string& title, const PcaResult& pca, const std::vector<NodeId>& nodes) {
    std::cout << title << "\n";
    for (NodeId i : nodes) {
        std::cout << "  node " << std::setw(2) << i << ":";
        for (Eigen::Index k = 0; k < pca.components(); ++k) {
            std::cout << " " << std::setw(12) << std::fixed << std::setprecision(8) << pca.coordinates(static_cast<Eigen::Index>(i), k);
        }
        std::cout << "\n";
    }
}

double max_shift(const PcaResult& a, const PcaResult& b) {
    // compare up to the sign of each component
    double worst = 0.0;
    for (Eigen::Index k = 0; k < a.components(); ++k) {
        const double same = (a.coordinates.col(k) - b.coordinates.col(k)).cwiseAbs().maxCoeff();
        const double flip = (a.coordinates.col(k) + b.coordinates.col(k)).cwiseAbs().maxCoeff();
        worst = std::max(worst, std::min(same, flip));
    }
    return worst;
}

int cmd_demo() {
    const std::size_t cliques = 5, size = 4;
    auto edges = star_of_cliques_edges(cliques, size);
    const auto base = build_graph(edges, false);
    FeatureSpec spec;
    spec.max_hops = 6;
    spec.reference_count = 0;
    const std::vector<NodeId> peers{2, 6, 10, 14, 18};

    std::cout << "star of " << cliques << " cliques of " << size << " nodes, center 0, gates 1,5,9,13,17\n\n";
    auto plain = mc_gpca(assemble(base, spec), 2);
    print_rows("no reference nodes: symmetric peers share coordinates", plain, peers);

    auto with_ref = spec;
    with_ref.reference_selection = ReferenceSelection::explicit_list;
    with_ref.explicit_references = {2};
    auto ref = mc_gpca(assemble(base, with_ref), 2);
    print_rows("\nreference node 2 (inside clique 0): peers separate", ref, peers);

    auto heavier = edges;
    heavier[1].weight = 3.0;  // an edge inside clique 0
    auto w = mc_gpca(assemble(build_graph(heavier, false), spec), 2);
    std::cout << "\nedge (" << heavier[1].source << "," << heavier[1].target << ") weight 1 -> 3: max coordinate shift "
              << std::scientific << std::setprecision(3) << max_shift(plain, w) << "\n";

    auto removed = edges;
    removed.erase(removed.begin() + 1);
    auto r = mc_gpca(assemble(build_graph(removed, false, base.node_count()), spec), 2);
    std::cout << "edge (" << edges[1].source << "," << edges[1].target << ") removed: max coordinate shift "
              << max_shift(plain, r) << "\n";

    // the same edges read as arcs, then one arc reversed
    auto dspec = spec;
    dspec.strict_feasibility = true;
    auto d0 = mc_gpca(assemble(build_graph(edges, true), dspec), 2);
    auto flipped = edges;
    std::swap(flipped[1].source, flipped[1].target);
    auto d1 = mc_gpca(assemble(build_graph(flipped, true), dspec), 2);
    std::cout << "directed reading, arc " << edges[1].source << "->" << edges[1].target
              << " reversed: max coordinate shift " << max_shift(d0, d1) << "\n";
    std::cout.unsetf(std::ios::floatfield);
    return 0;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::usage: return 2;
    case ErrorKind::data: return 3;
    case ErrorKind::numerical: return 4;
    }
    return 3;
}

void add_graph_options(CLI::App* sub, Config& c) {
    sub->add_option("--input", c.inputs, "edge-list file (repeatable)");
    sub->add_option("--input-dir", c.input_dir, "directory of edge-list files, read in lexicographic order");
    sub->add_flag("--directed", c.directed, "treat edges as directed");
    sub->add_option("--max-hops", c.max_hops, "walk length H")->capture_default_str();
    sub->add_option("--centralities", c.centralities, "comma list of degree,betweenness,closeness,eigenvector,ego,lfvc; all; none")
        ->capture_default_str();
    sub->add_option("--refs", c.refs, "number of max-degree reference nodes")->capture_default_str();
    sub->add_option("--metric", c.metric, "path metric: hop, weighted, inverse");
    sub->add_flag("--strict", c.strict, "drop features that are infeasible for the graph type");
    sub->add_flag("--inexact-walks", c.inexact_walks, "allow walk counts beyond 2^53 (rounded)");
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--format", c.format, "csv or json")->capture_default_str();
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-centrality graph PCA, structural difference scores and graph dictionary learning"};
    app.require_subcommand(1);
    Config c;

    auto* features = app.add_subcommand("features", "write the normalized, centered feature matrix of each graph");
    add_graph_options(features, c);

    auto* gpca = app.add_subcommand("gpca-sds", "per-node principal coordinates and structural difference scores");
    add_graph_options(gpca, c);
    gpca->add_option("--q", c.q, "principal components")->capture_default_str();
    gpca->add_option("--reducer", c.reducer, "graph statistic: mean, max, top:<k>")->capture_default_str();

    auto* gdl = app.add_subcommand("gdl", "dictionary learning over an ensemble of graphs, then K-means labels");
    add_graph_options(gdl, c);
    gdl->add_option("--q", c.q, "principal components")->capture_default_str();
    gdl->add_option("--reducer", c.reducer, "graph statistic: mean, max, top:<k>")->capture_default_str();
    gdl->add_option("--z", c.z, "top SDS values kept per graph")->capture_default_str();
    gdl->add_option("--atoms", c.atoms, "dictionary atoms K")->capture_default_str();
    gdl->add_option("--sparsity", c.sparsity, "nonzeros per coefficient column S")->capture_default_str();
    gdl->add_option("--iters", c.iters, "K-SVD sweeps")->capture_default_str();
    gdl->add_option("--clusters", c.clusters, "K-means clusters")->capture_default_str();

    auto* demo = app.add_subcommand("demo", "walk through the symmetry and perturbation behaviour on a star of cliques");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (features->parsed()) return cmd_features(c);
        if (gpca->parsed()) return cmd_gpca_sds(c);
        if (gdl->parsed()) return cmd_gdl(c);
        if (demo->parsed()) return cmd_demo();
    } catch (const Error& e) {
        std::cerr << "mcgraph: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "mcgraph: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
