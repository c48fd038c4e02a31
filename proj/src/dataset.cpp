#include "stgst/dataset.hpp"

#include "stgst/rng.hpp"
#include "stgst/shift.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace stgst {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RawSample {
    std::string id;
    int label;
    // (channel, node, time, value) triples in file order
    std::vector<std::tuple<int, int, int, double>> cells;
    int max_time = -1;
};

RawSample parse_sample_csv(const std::string& path, int n_spatial, int channels) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file: " + path);

    auto fail = [&](int line, const std::string& what) {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
    };

    RawSample raw;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "channel,node,time,value")
                fail(line_no, "expected header 'channel,node,time,value', got '" + line + "'");
            continue;
        }
        std::istringstream row(line);
        std::string field;
        long nums[3];
        for (int f = 0; f < 3; ++f) {
            if (!std::getline(row, field, ',')) fail(line_no, "expected 4 comma-separated fields");
            try {
                std::size_t used = 0;
                nums[f] = std::stol(field, &used);
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                fail(line_no, "malformed integer field '" + field + "'");
            }
        }
        if (!std::getline(row, field)) fail(line_no, "expected 4 comma-separated fields");
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(field, &used);
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            fail(line_no, "malformed value field '" + field + "'");
        }
        const int c = static_cast<int>(nums[0]), n = static_cast<int>(nums[1]),
                  t = static_cast<int>(nums[2]);
        if (c < 0 || c >= channels) fail(line_no, "channel index out of range");
        if (n < 0 || n >= n_spatial) fail(line_no, "node index out of range");
        if (t < 0) fail(line_no, "negative time index");
        if (!std::isfinite(value)) fail(line_no, "non-finite value");
        raw.cells.emplace_back(c, n, t, value);
        raw.max_time = std::max(raw.max_time, t);
    }
    return raw;
}

} // namespace

Dataset load_dataset(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
    json manifest = json::parse(in);

    Dataset ds;
    ds.n_spatial = manifest.at("n_spatial").get<int>();
    ds.channels = manifest.at("channels").get<int>();
    if (ds.n_spatial <= 0 || ds.channels <= 0)
        throw std::runtime_error("manifest: n_spatial and channels must be positive");
    const auto& samples = manifest.at("samples");
    if (samples.empty()) throw std::runtime_error("empty dataset: manifest lists no samples");

    const fs::path base = fs::path(manifest_path).parent_path();
    std::vector<RawSample> raws;
    raws.reserve(samples.size());
    int max_time = -1;
    for (const auto& s : samples) {
        const std::string rel = s.at("path").get<std::string>();
        const fs::path path = fs::path(rel).is_absolute() ? fs::path(rel) : base / rel;
        RawSample raw = parse_sample_csv(path.string(), ds.n_spatial, ds.channels);
        raw.id = s.at("id").get<std::string>();
        raw.label = s.at("label").get<int>();
        if (raw.label < 0) throw std::runtime_error("manifest: labels must be nonnegative");
        max_time = std::max(max_time, raw.max_time);
        raws.push_back(std::move(raw));
    }
    if (max_time < 0) throw std::runtime_error("empty dataset: no cells in any sample");
    ds.n_time = max_time + 1;

    ds.samples.reserve(raws.size());
    for (auto& raw : raws) {
        Sample sample;
        sample.id = std::move(raw.id);
        sample.label = raw.label;
        sample.original_time = raw.max_time + 1;
        std::vector<Eigen::MatrixXd> data(
            static_cast<std::size_t>(ds.channels),
            Eigen::MatrixXd::Zero(ds.n_spatial, ds.n_time));
        for (const auto& [c, n, t, v] : raw.cells) data[static_cast<std::size_t>(c)](n, t) = v;
        sample.signal = make_signal(std::move(data));
        ds.samples.push_back(std::move(sample));
    }
    return ds;
}

void write_dataset(const Dataset& ds, const Graph& spatial_graph, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    json manifest;
    manifest["n_spatial"] = ds.n_spatial;
    manifest["channels"] = ds.channels;
    manifest["samples"] = json::array();
    for (const auto& s : ds.samples) {
        const std::string file = s.id + ".csv";
        manifest["samples"].push_back({{"id", s.id}, {"label", s.label}, {"path", file}});
        std::ofstream csv(dir / file);
        csv << "channel,node,time,value\n";
        csv.precision(17);
        for (int c = 0; c < ds.channels; ++c)
            for (int n = 0; n < ds.n_spatial; ++n)
                for (int t = 0; t < ds.n_time; ++t)
                    csv << c << ',' << n << ',' << t << ',' << s.signal.data[c](n, t) << '\n';
    }
    std::ofstream mf(dir / "manifest.json");
    mf << manifest.dump(2) << '\n';

    json graph_json;
    graph_json["n"] = spatial_graph.n;
    graph_json["edges"] = json::array();
    for (int i = 0; i < spatial_graph.n; ++i)
        for (int j = i + 1; j < spatial_graph.n; ++j)
            if (spatial_graph.adjacency(i, j) != 0.0)
                graph_json["edges"].push_back({i, j, spatial_graph.adjacency(i, j)});
    std::ofstream gf(dir / "graph.json");
    gf << graph_json.dump(2) << '\n';
}

SyntheticDataset generate_synthetic_dataset(const SyntheticParams& params) {
    if (params.n_samples <= 0 || params.n_spatial <= 1 || params.n_time <= 1 ||
        params.channels <= 0 || params.n_classes <= 0)
        throw std::invalid_argument("synthetic dataset: parameters must be positive");

    constexpr double kTwoPi = 2.0 * std::numbers::pi;

    Graph graph = random_connected_graph(params.n_spatial, params.seed);

    // Smooth profiles live in the low end of the Laplacian spectrum.
    const ShiftMatrix laplacian =
        eigendecompose(make_shift(graph, ShiftKind::NormalizedLaplacian));
    const int k_low = std::min(3, params.n_spatial);
    const Eigen::MatrixXd basis = laplacian.eig->vectors.leftCols(k_low);

    // Class frequencies in whole cycles per clip, kept under Nyquist.
    std::vector<double> cycles(static_cast<std::size_t>(params.n_classes));
    for (int c = 0; c < params.n_classes; ++c)
        cycles[static_cast<std::size_t>(c)] =
            std::min(4.0 + 12.0 * c, params.n_time / 2.0 - 2.0);

    Dataset ds;
    ds.n_spatial = params.n_spatial;
    ds.channels = params.channels;
    ds.n_time = params.n_time;
    ds.samples.reserve(static_cast<std::size_t>(params.n_samples));

    for (int idx = 0; idx < params.n_samples; ++idx) {
        auto rng = make_engine(params.seed, 1000 + static_cast<std::uint64_t>(idx));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> phase(0.0, kTwoPi);
        std::uniform_real_distribution<double> amp(0.8, 1.2);

        const int label = idx % params.n_classes;
        const double omega = kTwoPi * cycles[static_cast<std::size_t>(label)] / params.n_time;

        std::vector<Eigen::MatrixXd> data;
        data.reserve(static_cast<std::size_t>(params.channels));
        for (int c = 0; c < params.channels; ++c) {
            Eigen::VectorXd alpha(k_low);
            for (int m = 0; m < k_low; ++m) alpha(m) = gauss(rng);
            Eigen::VectorXd profile = basis * alpha;
            // Mean-removed so the class carrier cancels under spatial
            // averaging; only rectified band energies see the label.
            profile.array() -= profile.mean();
            const double rms = std::sqrt(profile.squaredNorm() / params.n_spatial);
            profile *= amp(rng) / (rms > 1e-12 ? rms : 1.0);

            const double theta = phase(rng); // one carrier phase per channel
            Eigen::MatrixXd z(params.n_spatial, params.n_time);
            for (int n = 0; n < params.n_spatial; ++n)
                for (int t = 0; t < params.n_time; ++t)
                    z(n, t) = profile(n) * std::sin(omega * t + theta);
            for (int n = 0; n < params.n_spatial; ++n)
                for (int t = 0; t < params.n_time; ++t)
                    z(n, t) += params.noise_sigma * gauss(rng);
            data.push_back(std::move(z));
        }

        Sample sample;
        std::ostringstream id;
        id << "s" << std::setw(4) << std::setfill('0') << idx;
        sample.id = id.str();
        sample.label = label;
        sample.original_time = params.n_time;
        sample.signal = make_signal(std::move(data));
        ds.samples.push_back(std::move(sample));
    }

    return SyntheticDataset{std::move(ds), std::move(graph)};
}

} // namespace stgst
