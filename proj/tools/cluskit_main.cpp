#include "CLI11.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cluskit/pipeline.hpp"
#include "cluskit/synth.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string dataset_dir;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("-c,--config", opts.config_path, "Path to the run config file")->required();
    cmd->add_option("--dataset-dir", opts.dataset_dir, "Override dataset_dir from the config");
    cmd->add_option("--output-dir", opts.output_dir, "Override output_dir from the config");
    cmd->add_option("--seed", opts.seed, "Override seed from the config")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
}

cluskit::PipelineConfig resolve_config(const CommonOptions& opts) {
    std::ifstream in(opts.config_path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + opts.config_path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    cluskit::PipelineConfig cfg = cluskit::parse_config_text(text.str());
    if (!opts.dataset_dir.empty()) {
        cfg.dataset_dir = opts.dataset_dir;
    }
    if (!opts.output_dir.empty()) {
        cfg.output_dir = opts.output_dir;
    }
    if (opts.seed_set) {
        cfg.seed = opts.seed;
    }
    cluskit::validate_config(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering toolkit: robust continuous clustering, k-means++, PCA, "
                 "t-SNE, and evaluation over directory-per-class image datasets"};
    app.require_subcommand(1);

    CommonOptions ingest_opts;
    CommonOptions cluster_opts;
    CommonOptions embed_opts;
    CommonOptions evaluate_opts;
    CommonOptions plot_opts;
    CommonOptions pipeline_opts;

    add_common_options(
        app.add_subcommand("ingest", "Load images, fit PCA, write features and labels"),
        ingest_opts);
    add_common_options(
        app.add_subcommand("cluster", "Cluster the ingested features"), cluster_opts);
    add_common_options(app.add_subcommand("embed", "Embed the features in 2-D"), embed_opts);
    add_common_options(
        app.add_subcommand("evaluate", "Score predictions against the true labels"),
        evaluate_opts);
    add_common_options(app.add_subcommand("plot", "Render embedding scatter plots"), plot_opts);
    add_common_options(app.add_subcommand("pipeline", "Run every stage in order"),
                       pipeline_opts);

    std::string toy_dir;
    int toy_per_class = 30;
    int toy_width = 16;
    int toy_height = 16;
    std::uint64_t toy_seed = 0;
    CLI::App* toy = app.add_subcommand("toy", "Write a small synthetic image dataset");
    toy->add_option("-o,--out", toy_dir, "Directory for the synthetic dataset")->required();
    toy->add_option("--per-class", toy_per_class, "Images per class");
    toy->add_option("--width", toy_width, "Image width in pixels");
    toy->add_option("--height", toy_height, "Image height in pixels");
    toy->add_option("--seed", toy_seed, "Generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("ingest")) {
            cluskit::run_ingest(resolve_config(ingest_opts));
        } else if (app.got_subcommand("cluster")) {
            cluskit::run_cluster(resolve_config(cluster_opts));
        } else if (app.got_subcommand("embed")) {
            cluskit::run_embed(resolve_config(embed_opts));
        } else if (app.got_subcommand("evaluate")) {
            cluskit::run_evaluate(resolve_config(evaluate_opts));
        } else if (app.got_subcommand("plot")) {
            cluskit::run_plot(resolve_config(plot_opts));
        } else if (app.got_subcommand("pipeline")) {
            cluskit::run_pipeline(resolve_config(pipeline_opts));
        } else if (app.got_subcommand("toy")) {
            if (toy_per_class < 1) {
                throw std::invalid_argument("--per-class must be >= 1");
            }
            cluskit::write_blob_image_dataset(toy_dir, toy_per_class, toy_width, toy_height,
                                              toy_seed);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
