#pragma once

// Output tables (CSV or JSON with identical content), the dictionary model
// JSON document, and write-to-temp-then-rename file output.

#include "mcgraph/dictionary.hpp"
#include "mcgraph/error.hpp"
#include "mcgraph/features.hpp"
#include "mcgraph/graph.hpp"
#include "mcgraph/spectral.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

namespace mcgraph {

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

enum class OutputFormat { csv, json };

inline OutputFormat parse_output_format(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw Error(ErrorCode::invalid_argument, "unknown output format '" + text + "' (csv, json)");
}

inline std::string extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".json"; }

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string cell_text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return csv_escape(*s);
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    return std::to_string(std::get<std::int64_t>(c));
}

} // namespace detail

inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (c) out += ',';
        out += detail::csv_escape(t.header[c]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += detail::cell_text(row[c]);
        }
        out += '\n';
    }
    return out;
}

/// Array of row objects keyed by the CSV header.
inline nlohmann::ordered_json to_json(const Table& t) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::visit([&](const auto& v) { obj[t.header[c]] = v; }, row[c]);
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

inline std::string render(const Table& t, OutputFormat f) {
    return f == OutputFormat::csv ? to_csv(t) : to_json(t).dump(2) + "\n";
}

inline Table feature_table(const Graph& g, const FeatureMatrix& fm) {
    Table t;
    t.header.push_back("node");
    t.header.insert(t.header.end(), fm.column_names.begin(), fm.column_names.end());
    for (Eigen::Index i = 0; i < fm.rows(); ++i) {
        std::vector<Cell> row{g.label(static_cast<NodeId>(i))};
        for (Eigen::Index c = 0; c < fm.cols(); ++c) row.emplace_back(fm.matrix(i, c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// node, pc1..pcq, sds.
inline Table coordinate_table(const Graph& g, const PcaResult& pca, const std::vector<double>& scores) {
    Table t;
    t.header.push_back("node");
    for (Eigen::Index k = 0; k < pca.components(); ++k) t.header.push_back("pc" + std::to_string(k + 1));
    t.header.push_back("sds");
    for (Eigen::Index i = 0; i < pca.coordinates.rows(); ++i) {
        std::vector<Cell> row{g.label(static_cast<NodeId>(i))};
        for (Eigen::Index k = 0; k < pca.components(); ++k) row.emplace_back(pca.coordinates(i, k));
        row.emplace_back(scores[static_cast<std::size_t>(i)]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline nlohmann::ordered_json model_to_json(const DictionaryModel& m, const std::vector<std::string>& graph_names = {}) {
    nlohmann::ordered_json j;
    j["z"] = m.z;
    j["K"] = m.atom_count;
    j["S"] = m.sparsity;
    j["seed"] = m.seed;
    auto columns = [](const Eigen::MatrixXd& mat) {
        auto arr = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < mat.cols(); ++c) {
            std::vector<double> col(mat.col(c).data(), mat.col(c).data() + mat.rows());
            arr.push_back(col);
        }
        return arr;
    };
    j["atoms"] = columns(m.atoms);
    j["coefficients"] = columns(m.coefficients);
    j["training_log"] = m.training_log;
    j["final_error"] = m.final_error;
    j["degenerate"] = m.degenerate;
    j["note"] = m.note;
    if (!graph_names.empty()) j["graphs"] = graph_names;
    return j;
}

inline DictionaryModel model_from_json(const nlohmann::json& j) {
    DictionaryModel m;
    try {
        m.z = j.at("z").get<std::size_t>();
        m.atom_count = j.at("K").get<std::size_t>();
        m.sparsity = j.at("S").get<std::size_t>();
        m.seed = j.at("seed").get<std::uint64_t>();
        auto matrix = [](const nlohmann::json& arr, std::size_t rows) {
            Eigen::MatrixXd mat(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(arr.size()));
            for (std::size_t c = 0; c < arr.size(); ++c) {
                auto col = arr[c].get<std::vector<double>>();
                if (col.size() != rows) throw Error(ErrorCode::parse_error, "model column has wrong length");
                for (std::size_t r = 0; r < rows; ++r) mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
            }
            return mat;
        };
        m.atoms = matrix(j.at("atoms"), m.z);
        m.coefficients = matrix(j.at("coefficients"), m.atom_count);
        m.training_log = j.at("training_log").get<std::vector<double>>();
        m.final_error = j.at("final_error").get<double>();
        m.degenerate = j.value("degenerate", false);
        m.note = j.value("note", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("malformed model JSON: ") + e.what());
    }
    return m;
}

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error(ErrorCode::invalid_argument, "failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::invalid_argument, "cannot rename " + tmp.string() + ": " + ec.message());
}

} // namespace mcgraph
