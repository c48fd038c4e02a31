#include "stgst/json_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stgst {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return json::parse(in);
}

Graph graph_from_json(const json& j) {
    Graph g;
    g.n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw std::runtime_error("graph json: each edge must be [i, j, w]");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
    }
    return build_graph_from_edges(g.n, edges);
}

} // namespace

Graph load_graph_json(const std::string& path) { return graph_from_json(read_json_file(path)); }

Graph parse_graph_json(const std::string& text) { return graph_from_json(json::parse(text)); }

void save_graph_json(const Graph& g, const std::string& path) {
    validate_graph(g);
    json j;
    j["n"] = g.n;
    j["edges"] = json::array();
    for (int i = 0; i < g.n; ++i)
        for (int k = i + 1; k < g.n; ++k)
            if (g.adjacency(i, k) != 0.0) j["edges"].push_back({i, k, g.adjacency(i, k)});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

void save_shift_json(const ShiftMatrix& s, const std::string& path) {
    json j;
    j["kind"] = shift_kind_name(s.kind);
    j["n"] = s.dim();
    j["symmetric"] = s.symmetric;
    j["matrix"] = json::array();
    for (int i = 0; i < s.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < s.dim(); ++k) row.push_back(s.matrix(i, k));
        j["matrix"].push_back(std::move(row));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump() << '\n';
}

ShiftMatrix load_shift_json(const std::string& path) {
    json j = read_json_file(path);
    ShiftMatrix s;
    s.kind = parse_shift_kind(j.at("kind").get<std::string>());
    const int n = j.at("n").get<int>();
    s.matrix.resize(n, n);
    const auto& rows = j.at("matrix");
    if (static_cast<int>(rows.size()) != n)
        throw std::runtime_error("shift json: matrix row count mismatch");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::runtime_error("shift json: matrix column count mismatch");
        for (int k = 0; k < n; ++k) s.matrix(i, k) = rows[i][k].get<double>();
    }
    s.symmetric = j.at("symmetric").get<bool>();
    return s;
}

void write_features_csv(const FeatureTable& table, const std::string& path) {
    if (table.ids.size() != table.labels.size() ||
        static_cast<Eigen::Index>(table.ids.size()) != table.features.rows())
        throw std::invalid_argument("feature table: row counts disagree");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "sample_id,label";
    for (Eigen::Index c = 0; c < table.features.cols(); ++c) out << ",f" << c;
    out << '\n';
    out.precision(17);
    for (Eigen::Index r = 0; r < table.features.rows(); ++r) {
        out << table.ids[static_cast<std::size_t>(r)] << ','
            << table.labels[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < table.features.cols(); ++c)
            out << ',' << table.features(r, c);
        out << '\n';
    }
}

FeatureTable read_features_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty feature file");

    auto split_line = [](const std::string& text) {
        std::vector<std::string> fields;
        std::istringstream row(text);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        return fields;
    };
    const std::size_t columns = split_line(line).size();
    if (columns < 3) throw std::runtime_error(path + ": expected sample_id,label,f0,...");

    FeatureTable table;
    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != columns)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": field count mismatch");
        table.ids.push_back(fields[0]);
        table.labels.push_back(std::stoi(fields[1]));
        std::vector<double> values;
        values.reserve(columns - 2);
        for (std::size_t f = 2; f < fields.size(); ++f) values.push_back(std::stod(fields[f]));
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no feature rows");

    table.features.resize(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(columns - 2));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c + 2 < columns; ++c)
            table.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c];
    return table;
}

std::string reports_to_json(const std::vector<StabilityReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        json j;
        j["check"] = r.check;
        j["lhs"] = r.lhs;
        j["rhs"] = r.rhs;
        j["margin"] = r.margin;
        j["pass"] = r.pass;
        j["seed"] = r.seed;
        j["trials"] = r.trials;
        j["digest"] = r.inputs_digest;
        if (!r.note.empty()) j["note"] = r.note;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

} // namespace stgst
