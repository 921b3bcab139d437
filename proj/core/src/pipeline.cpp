#include "cluskit/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cluskit/csv.hpp"
#include "cluskit/kmeans.hpp"
#include "cluskit/metrics.hpp"
#include "cluskit/pca.hpp"
#include "cluskit/rcc.hpp"
#include "cluskit/svg.hpp"
#include "cluskit/tsne.hpp"

namespace cluskit {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t pos = value.find(',', start);
        const std::string item =
            trim(std::string_view(value).substr(start, (pos == std::string::npos ? value.size() : pos) - start));
        if (!item.empty()) {
            items.push_back(item);
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return items;
}

int parse_int_value(const std::string& key, const std::string& value) {
    int out = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw std::invalid_argument("config key '" + key + "' needs an integer, got '" + value +
                                    "'");
    }
    return out;
}

std::uint64_t parse_u64_value(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
        throw std::invalid_argument("config key '" + key + "' needs a non-negative integer, got '" +
                                    value + "'");
    }
    return out;
}

double parse_double_value(const std::string& key, const std::string& value) {
    try {
        return parse_double(value);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("config key '" + key + "' needs a number, got '" + value +
                                    "'");
    }
}

bool parse_bool_value(const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw std::invalid_argument("config key '" + key + "' needs true or false, got '" + value +
                                "'");
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "dataset_dir",      "output_dir",          "resize",
        "grayscale",        "normalization_mode",  "pca_components",
        "knn_k",            "graph_weights",       "algorithms",
        "kmeans_k",         "kmeans_n_init",       "kmeans_max_iters",
        "rcc_max_iters",    "rcc_inner_iters_per_mu", "rcc_solver_tolerance",
        "rcc_cluster_cut_factor", "tsne_perplexity", "tsne_iters",
        "tsne_learning_rate", "tsne_exaggeration", "tsne_exaggeration_iters",
        "tsne_init_scale",  "seed",                "class_merge",
    };
    return keys;
}

void apply_key(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "dataset_dir") {
        cfg.dataset_dir = value;
    } else if (key == "output_dir") {
        cfg.output_dir = value;
    } else if (key == "resize") {
        const std::size_t pos = value.find('x');
        if (pos == std::string::npos) {
            throw std::invalid_argument("config key 'resize' needs WIDTHxHEIGHT, got '" + value +
                                        "'");
        }
        cfg.resize_width = parse_int_value(key, value.substr(0, pos));
        cfg.resize_height = parse_int_value(key, value.substr(pos + 1));
    } else if (key == "grayscale") {
        cfg.grayscale = parse_bool_value(key, value);
    } else if (key == "normalization_mode") {
        cfg.normalization_mode = parse_normalization_mode(value);
    } else if (key == "pca_components") {
        cfg.pca_components = parse_int_value(key, value);
    } else if (key == "knn_k") {
        cfg.knn_k = parse_int_value(key, value);
    } else if (key == "graph_weights") {
        if (value == "degree-balanced") {
            cfg.graph_weights = EdgeWeighting::degree_balanced;
        } else if (value == "uniform") {
            cfg.graph_weights = EdgeWeighting::uniform;
        } else {
            throw std::invalid_argument(
                "config key 'graph_weights' needs degree-balanced or uniform, got '" + value +
                "'");
        }
    } else if (key == "algorithms") {
        std::vector<std::string> algos = split_list(value);
        bool rcc = false;
        bool km = false;
        for (const auto& a : algos) {
            if (a == "rcc") {
                rcc = true;
            } else if (a == "kmeanspp") {
                km = true;
            } else {
                throw std::invalid_argument("config key 'algorithms' got unknown algorithm '" + a +
                                            "'");
            }
        }
        cfg.algorithms.clear();
        if (rcc) cfg.algorithms.push_back("rcc");
        if (km) cfg.algorithms.push_back("kmeanspp");
    } else if (key == "kmeans_k") {
        cfg.kmeans_k = parse_int_value(key, value);
    } else if (key == "kmeans_n_init") {
        cfg.kmeans_n_init = parse_int_value(key, value);
    } else if (key == "kmeans_max_iters") {
        cfg.kmeans_max_iters = parse_int_value(key, value);
    } else if (key == "rcc_max_iters") {
        cfg.rcc_max_iters = parse_int_value(key, value);
    } else if (key == "rcc_inner_iters_per_mu") {
        cfg.rcc_inner_iters_per_mu = parse_int_value(key, value);
    } else if (key == "rcc_solver_tolerance") {
        cfg.rcc_solver_tolerance = parse_double_value(key, value);
    } else if (key == "rcc_cluster_cut_factor") {
        cfg.rcc_cluster_cut_factor = parse_double_value(key, value);
    } else if (key == "tsne_perplexity") {
        cfg.tsne_perplexity = parse_double_value(key, value);
    } else if (key == "tsne_iters") {
        cfg.tsne_iters = parse_int_value(key, value);
    } else if (key == "tsne_learning_rate") {
        cfg.tsne_learning_rate = parse_double_value(key, value);
    } else if (key == "tsne_exaggeration") {
        cfg.tsne_exaggeration = parse_double_value(key, value);
    } else if (key == "tsne_exaggeration_iters") {
        cfg.tsne_exaggeration_iters = parse_int_value(key, value);
    } else if (key == "tsne_init_scale") {
        cfg.tsne_init_scale = parse_double_value(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_u64_value(key, value);
    } else if (key == "class_merge") {
        cfg.class_merge.clear();
        std::set<std::string> sources;
        for (const auto& item : split_list(value)) {
            const std::size_t pos = item.find(':');
            if (pos == std::string::npos) {
                throw std::invalid_argument(
                    "config key 'class_merge' needs from:to pairs, got '" + item + "'");
            }
            const std::string from = trim(std::string_view(item).substr(0, pos));
            const std::string to = trim(std::string_view(item).substr(pos + 1));
            if (from.empty() || to.empty()) {
                throw std::invalid_argument(
                    "config key 'class_merge' needs from:to pairs, got '" + item + "'");
            }
            if (!sources.insert(from).second) {
                throw std::invalid_argument("config key 'class_merge' repeats source '" + from +
                                            "'");
            }
            cfg.class_merge.emplace_back(from, to);
        }
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::set<std::string> seen;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        " is not 'key = value'");
        }
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (known_keys().count(key) == 0) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw std::invalid_argument("duplicate config key '" + key + "'");
        }
        apply_key(cfg, key, value);
    }
    return cfg;
}

void validate_config(const PipelineConfig& cfg) {
    if (cfg.dataset_dir.empty()) {
        throw std::invalid_argument("config key 'dataset_dir' is required");
    }
    if (cfg.output_dir.empty()) {
        throw std::invalid_argument("config key 'output_dir' must not be empty");
    }
    if (cfg.resize_width < 1 || cfg.resize_height < 1) {
        throw std::invalid_argument("config key 'resize' needs positive dimensions");
    }
    if (cfg.pca_components < 1) {
        throw std::invalid_argument("config key 'pca_components' must be >= 1");
    }
    if (cfg.knn_k < 1) {
        throw std::invalid_argument("config key 'knn_k' must be >= 1");
    }
    if (cfg.algorithms.empty()) {
        throw std::invalid_argument("config key 'algorithms' needs at least one algorithm");
    }
    if (cfg.kmeans_k < 1) {
        throw std::invalid_argument("config key 'kmeans_k' must be >= 1");
    }
    if (cfg.kmeans_n_init < 1) {
        throw std::invalid_argument("config key 'kmeans_n_init' must be >= 1");
    }
    if (cfg.kmeans_max_iters < 1) {
        throw std::invalid_argument("config key 'kmeans_max_iters' must be >= 1");
    }
    if (cfg.rcc_max_iters < 1) {
        throw std::invalid_argument("config key 'rcc_max_iters' must be >= 1");
    }
    if (cfg.rcc_inner_iters_per_mu < 1) {
        throw std::invalid_argument("config key 'rcc_inner_iters_per_mu' must be >= 1");
    }
    if (!(cfg.rcc_solver_tolerance > 0.0)) {
        throw std::invalid_argument("config key 'rcc_solver_tolerance' must be > 0");
    }
    if (!(cfg.rcc_cluster_cut_factor > 0.0)) {
        throw std::invalid_argument("config key 'rcc_cluster_cut_factor' must be > 0");
    }
    if (!(cfg.tsne_perplexity > 0.0)) {
        throw std::invalid_argument("config key 'tsne_perplexity' must be > 0");
    }
    if (cfg.tsne_iters < 1) {
        throw std::invalid_argument("config key 'tsne_iters' must be >= 1");
    }
    if (!(cfg.tsne_learning_rate > 0.0)) {
        throw std::invalid_argument("config key 'tsne_learning_rate' must be > 0");
    }
    if (!(cfg.tsne_exaggeration >= 1.0)) {
        throw std::invalid_argument("config key 'tsne_exaggeration' must be >= 1");
    }
    if (cfg.tsne_exaggeration_iters < 0) {
        throw std::invalid_argument("config key 'tsne_exaggeration_iters' must be >= 0");
    }
    if (!(cfg.tsne_init_scale > 0.0)) {
        throw std::invalid_argument("config key 'tsne_init_scale' must be > 0");
    }
}

PipelineConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    PipelineConfig cfg = parse_config_text(text.str());
    validate_config(cfg);
    return cfg;
}

std::string echo_config(const PipelineConfig& cfg) {
    std::ostringstream out;
    out << "dataset_dir = " << cfg.dataset_dir.string() << '\n';
    out << "output_dir = " << cfg.output_dir.string() << '\n';
    out << "resize = " << cfg.resize_width << 'x' << cfg.resize_height << '\n';
    out << "grayscale = " << (cfg.grayscale ? "true" : "false") << '\n';
    out << "normalization_mode = " << to_string(cfg.normalization_mode) << '\n';
    out << "pca_components = " << cfg.pca_components << '\n';
    out << "knn_k = " << cfg.knn_k << '\n';
    out << "graph_weights = "
        << (cfg.graph_weights == EdgeWeighting::uniform ? "uniform" : "degree-balanced") << '\n';
    out << "algorithms = ";
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
        if (i > 0) out << ',';
        out << cfg.algorithms[i];
    }
    out << '\n';
    out << "kmeans_k = " << cfg.kmeans_k << '\n';
    out << "kmeans_n_init = " << cfg.kmeans_n_init << '\n';
    out << "kmeans_max_iters = " << cfg.kmeans_max_iters << '\n';
    out << "rcc_max_iters = " << cfg.rcc_max_iters << '\n';
    out << "rcc_inner_iters_per_mu = " << cfg.rcc_inner_iters_per_mu << '\n';
    out << "rcc_solver_tolerance = " << format_double(cfg.rcc_solver_tolerance) << '\n';
    out << "rcc_cluster_cut_factor = " << format_double(cfg.rcc_cluster_cut_factor) << '\n';
    out << "tsne_perplexity = " << format_double(cfg.tsne_perplexity) << '\n';
    out << "tsne_iters = " << cfg.tsne_iters << '\n';
    out << "tsne_learning_rate = " << format_double(cfg.tsne_learning_rate) << '\n';
    out << "tsne_exaggeration = " << format_double(cfg.tsne_exaggeration) << '\n';
    out << "tsne_exaggeration_iters = " << cfg.tsne_exaggeration_iters << '\n';
    out << "tsne_init_scale = " << format_double(cfg.tsne_init_scale) << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "class_merge = ";
    for (std::size_t i = 0; i < cfg.class_merge.size(); ++i) {
        if (i > 0) out << ',';
        out << cfg.class_merge[i].first << ':' << cfg.class_merge[i].second;
    }
    out << '\n';
    return out.str();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << content;
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

void remove_artifacts(const PipelineConfig& cfg, const std::vector<std::string>& names) {
    for (const auto& name : names) {
        std::error_code ec;
        std::filesystem::remove(cfg.output_dir / name, ec);
    }
}

std::vector<std::string> stage_artifacts(const PipelineConfig& cfg, const std::string& stage) {
    std::vector<std::string> names;
    const bool has_rcc =
        std::find(cfg.algorithms.begin(), cfg.algorithms.end(), "rcc") != cfg.algorithms.end();
    const bool has_km = std::find(cfg.algorithms.begin(), cfg.algorithms.end(), "kmeanspp") !=
                        cfg.algorithms.end();
    if (stage == "ingest") {
        names = {"features.csv", "labels_true.csv", "pca_model.csv"};
    } else if (stage == "cluster") {
        for (const auto& algo : cfg.algorithms) {
            names.push_back("labels_pred_" + algo + ".csv");
        }
        if (has_rcc) names.push_back("rcc_trace.csv");
        if (has_km) names.push_back("kmeans_restarts.json");
    } else if (stage == "embed") {
        names = {"embedding.csv"};
    } else if (stage == "evaluate") {
        names = {"metrics.json"};
    } else if (stage == "plot") {
        names.push_back("scatter_true.svg");
        for (const auto& algo : cfg.algorithms) {
            names.push_back("scatter_" + algo + ".svg");
        }
    }
    return names;
}

template <typename Body>
void run_stage(const PipelineConfig& cfg, const std::string& stage, Body&& body) {
    validate_config(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    write_text(cfg.output_dir / "config_resolved.txt", echo_config(cfg));
    try {
        body();
    } catch (const std::invalid_argument& e) {
        remove_artifacts(cfg, stage_artifacts(cfg, stage));
        throw std::invalid_argument(stage + ": " + e.what());
    } catch (const std::exception& e) {
        remove_artifacts(cfg, stage_artifacts(cfg, stage));
        throw std::runtime_error(stage + ": " + e.what());
    }
}

/// Order-preserving relabel onto 0..m-1 so every cluster id is used.
LabelVector compact_prediction(const std::vector<int>& labels) {
    int max_label = 0;
    for (int l : labels) {
        max_label = std::max(max_label, l);
    }
    std::vector<int> remap(static_cast<std::size_t>(max_label) + 1, -1);
    for (int l : labels) {
        remap[static_cast<std::size_t>(l)] = 0;
    }
    int next = 0;
    for (auto& slot : remap) {
        if (slot == 0) {
            slot = next++;
        }
    }
    LabelVector out;
    out.labels.reserve(labels.size());
    for (int l : labels) {
        out.labels.push_back(remap[static_cast<std::size_t>(l)]);
    }
    for (int c = 0; c < next; ++c) {
        out.class_names.push_back("cluster_" + std::to_string(c));
    }
    return out;
}

json rate_json(const std::optional<double>& rate) {
    if (rate.has_value()) {
        return *rate;
    }
    return nullptr;
}

json evaluate_algorithm(const LabelVector& truth, const LabelVector& pred) {
    const ContingencyTable t = contingency(truth.labels, pred.labels);
    const std::vector<int> mapping = majority_map(pred.labels, truth.labels);
    const ConfusionMatrix cm =
        confusion_matrix(pred.labels, truth.labels, mapping, truth.class_names);

    json out;
    out["ami"] = ami(truth.labels, pred.labels);
    out["mi"] = mutual_information(t);
    out["emi"] = expected_mi(t);
    out["entropy_a"] = entropy_rows(t);
    out["entropy_b"] = entropy_cols(t);
    out["n_clusters"] = pred.n_classes();
    out["classes"] = truth.class_names;
    json confusion = json::array();
    for (Eigen::Index r = 0; r < cm.counts.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < cm.counts.cols(); ++c) {
            row.push_back(cm.counts(r, c));
        }
        confusion.push_back(row);
    }
    out["confusion"] = confusion;
    json per_class = json::array();
    for (std::size_t c = 0; c < truth.class_names.size(); ++c) {
        const SensSpec row = sensitivity_specificity(cm, static_cast<int>(c),
                                                     TruthConvention::row_truth);
        const SensSpec col = sensitivity_specificity(cm, static_cast<int>(c),
                                                     TruthConvention::column_truth);
        per_class.push_back({
            {"class", truth.class_names[c]},
            {"row_truth",
             {{"sensitivity", rate_json(row.sensitivity)},
              {"specificity", rate_json(row.specificity)}}},
            {"column_truth",
             {{"sensitivity", rate_json(col.sensitivity)},
              {"specificity", rate_json(col.specificity)}}},
        });
    }
    out["per_class"] = per_class;
    return out;
}

}  // namespace

std::vector<std::string> pipeline_artifacts(const PipelineConfig& cfg) {
    std::vector<std::string> names = {"config_resolved.txt"};
    for (const char* stage : {"ingest", "cluster", "embed", "evaluate", "plot"}) {
        for (auto& name : stage_artifacts(cfg, stage)) {
            names.push_back(std::move(name));
        }
    }
    return names;
}

void run_ingest(const PipelineConfig& cfg) {
    run_stage(cfg, "ingest", [&cfg] {
        IngestConfig icfg;
        icfg.root_dir = cfg.dataset_dir;
        icfg.resize_width = cfg.resize_width;
        icfg.resize_height = cfg.resize_height;
        icfg.grayscale = cfg.grayscale;
        icfg.normalization_mode = cfg.normalization_mode;
        auto [pixels, raw_labels] = load_image_dataset(icfg);
        const LabelVector labels = merge_classes(raw_labels, cfg.class_merge);

        const PcaModel model = pca_fit(pixels, cfg.pca_components);
        const Matrix features = normalize(pca_transform(model, pixels), cfg.normalization_mode);

        write_matrix_csv(features, cfg.output_dir / "features.csv");
        write_labels_csv(labels, cfg.output_dir / "labels_true.csv");
        write_pca_model_csv(model, cfg.output_dir / "pca_model.csv");
    });
}

void run_cluster(const PipelineConfig& cfg) {
    run_stage(cfg, "cluster", [&cfg] {
        const Matrix x = read_matrix_csv(cfg.output_dir / "features.csv");
        for (const auto& algo : cfg.algorithms) {
            if (algo == "rcc") {
                RccConfig rcfg;
                rcfg.max_iters = cfg.rcc_max_iters;
                rcfg.inner_iters_per_mu = cfg.rcc_inner_iters_per_mu;
                rcfg.linear_solver_tolerance = cfg.rcc_solver_tolerance;
                rcfg.cluster_cut_factor = cfg.rcc_cluster_cut_factor;
                const NeighborGraph graph =
                    assign_edge_weights(mutual_knn_graph(x, cfg.knn_k), cfg.graph_weights);
                const auto [state, result] = rcc_fit(x, graph, rcfg);
                write_labels_csv(compact_prediction(result.labels),
                                 cfg.output_dir / "labels_pred_rcc.csv");
                write_objective_trace_csv(state, cfg.output_dir / "rcc_trace.csv");
            } else {
                KmeansConfig kcfg;
                kcfg.k = cfg.kmeans_k;
                kcfg.n_init = cfg.kmeans_n_init;
                kcfg.max_iters = cfg.kmeans_max_iters;
                kcfg.seed = cfg.seed;
                const ClusteringResult result = kmeans_fit(x, kcfg);
                write_labels_csv(compact_prediction(result.labels),
                                 cfg.output_dir / "labels_pred_kmeanspp.csv");

                json report;
                report["best_restart"] =
                    static_cast<int>(result.stats.at("best_restart"));
                report["inertia"] = result.stats.at("inertia");
                report["iterations"] = static_cast<int>(result.stats.at("iterations"));
                json restarts = json::array();
                for (int r = 0; r < cfg.kmeans_n_init; ++r) {
                    restarts.push_back(
                        {{"restart", r},
                         {"inertia", result.stats.at("restart_inertia_" + std::to_string(r))}});
                }
                report["restarts"] = restarts;
                write_text(cfg.output_dir / "kmeans_restarts.json", report.dump(2) + "\n");
            }
        }
    });
}

void run_embed(const PipelineConfig& cfg) {
    run_stage(cfg, "embed", [&cfg] {
        const Matrix x = read_matrix_csv(cfg.output_dir / "features.csv");
        TsneConfig tcfg;
        tcfg.perplexity = cfg.tsne_perplexity;
        tcfg.n_iters = cfg.tsne_iters;
        tcfg.learning_rate = cfg.tsne_learning_rate;
        tcfg.exaggeration = cfg.tsne_exaggeration;
        tcfg.exaggeration_iters = cfg.tsne_exaggeration_iters;
        tcfg.init_scale = cfg.tsne_init_scale;
        tcfg.seed = cfg.seed;
        const TsneResult result = tsne_embed(x, tcfg);
        write_matrix_csv(result.embedding, cfg.output_dir / "embedding.csv", {"x", "y"});
    });
}

void run_evaluate(const PipelineConfig& cfg) {
    run_stage(cfg, "evaluate", [&cfg] {
        const LabelVector truth = read_labels_csv(cfg.output_dir / "labels_true.csv");
        json all;
        for (const auto& algo : cfg.algorithms) {
            const LabelVector pred =
                read_labels_csv(cfg.output_dir / ("labels_pred_" + algo + ".csv"));
            if (pred.size() != truth.size()) {
                throw std::invalid_argument("prediction for '" + algo +
                                            "' does not match the sample count");
            }
            all[algo] = evaluate_algorithm(truth, pred);
        }
        write_text(cfg.output_dir / "metrics.json", all.dump(2) + "\n");
    });
}

void run_plot(const PipelineConfig& cfg) {
    run_stage(cfg, "plot", [&cfg] {
        const Matrix embedding = read_matrix_csv(cfg.output_dir / "embedding.csv");
        const LabelVector truth = read_labels_csv(cfg.output_dir / "labels_true.csv");
        if (embedding.rows() != static_cast<Eigen::Index>(truth.size())) {
            throw std::invalid_argument("embedding rows do not match the sample count");
        }
        write_text(cfg.output_dir / "scatter_true.svg",
                   render_scatter(embedding, truth.labels, truth.class_names, "ground truth"));
        for (const auto& algo : cfg.algorithms) {
            const LabelVector pred =
                read_labels_csv(cfg.output_dir / ("labels_pred_" + algo + ".csv"));
            if (pred.size() != truth.size()) {
                throw std::invalid_argument("prediction for '" + algo +
                                            "' does not match the sample count");
            }
            write_text(cfg.output_dir / ("scatter_" + algo + ".svg"),
                       render_scatter(embedding, pred.labels, pred.class_names, algo));
        }
    });
}

void run_pipeline(const PipelineConfig& cfg) {
    validate_config(cfg);
    try {
        run_ingest(cfg);
        run_cluster(cfg);
        run_embed(cfg);
        run_evaluate(cfg);
        run_plot(cfg);
    } catch (...) {
        remove_artifacts(cfg, pipeline_artifacts(cfg));
        throw;
    }
}

}  // namespace cluskit
