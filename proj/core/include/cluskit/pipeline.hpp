#pragma once

#include "cluskit/dataset.hpp"
#include "cluskit/graph.hpp"
#include "cluskit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cluskit {

/// Fully resolved run description. Defaults match an untouched config file.
struct PipelineConfig {
    std::filesystem::path dataset_dir;
    std::filesystem::path output_dir = "out";

    int resize_width = 128;
    int resize_height = 128;
    bool grayscale = true;
    NormalizationMode normalization_mode = NormalizationMode::global_norm;
    int pca_components = 80;

    int knn_k = 30;
    EdgeWeighting graph_weights = EdgeWeighting::degree_balanced;

    std::vector<std::string> algorithms = {"rcc", "kmeanspp"};  ///< canonical order

    int kmeans_k = 3;
    int kmeans_n_init = 10;
    int kmeans_max_iters = 300;

    int rcc_max_iters = 100;
    int rcc_inner_iters_per_mu = 4;
    double rcc_solver_tolerance = 1e-6;
    double rcc_cluster_cut_factor = 1.0;

    double tsne_perplexity = 30.0;
    int tsne_iters = 1000;
    double tsne_learning_rate = 200.0;
    double tsne_exaggeration = 4.0;
    int tsne_exaggeration_iters = 100;
    double tsne_init_scale = 1e-4;

    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> class_merge;  ///< old name -> new name

    bool operator==(const PipelineConfig&) const = default;
};

/// Parses "key = value" lines ('#' comments, blank lines allowed). Unknown
/// and duplicate keys are errors; values are syntax-checked per key.
/// Cross-field requirements are left to validate_config.
PipelineConfig parse_config_text(const std::string& text);

/// Full validation with key names in error messages: ranges, a non-empty
/// dataset_dir, and at least one algorithm.
void validate_config(const PipelineConfig& cfg);

/// Reads, parses, and validates a config file.
PipelineConfig parse_config(const std::filesystem::path& path);

/// Canonical echo of every resolved value; parse_config_text round-trips it.
std::string echo_config(const PipelineConfig& cfg);

/// File names (relative to output_dir) the pipeline can produce for cfg.
std::vector<std::string> pipeline_artifacts(const PipelineConfig& cfg);

/// Stages. Each writes config_resolved.txt plus its own artifacts into
/// output_dir, reads its inputs from output_dir, removes what it wrote when
/// it fails, and rethrows errors prefixed with the stage name.
void run_ingest(const PipelineConfig& cfg);    ///< features.csv, labels_true.csv, pca_model.csv
void run_cluster(const PipelineConfig& cfg);   ///< labels_pred_<algo>.csv, rcc_trace.csv, kmeans_restarts.json
void run_embed(const PipelineConfig& cfg);     ///< embedding.csv
void run_evaluate(const PipelineConfig& cfg);  ///< metrics.json
void run_plot(const PipelineConfig& cfg);      ///< scatter_true.svg, scatter_<algo>.svg

/// All stages in order. On failure every artifact of this run is removed and
/// the error is rethrown with the failing stage named.
void run_pipeline(const PipelineConfig& cfg);

}  // namespace cluskit
