#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cluskit/csv.hpp"
#include "cluskit/pipeline.hpp"
#include "cluskit/svg.hpp"
#include "cluskit/synth.hpp"
#include "support/testdata.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace cluskit;
using cluskit::testsupport::TempDir;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Small but complete run: three blob classes, a handful of images each.
PipelineConfig tiny_config(const std::filesystem::path& data,
                           const std::filesystem::path& out) {
    PipelineConfig cfg;
    cfg.dataset_dir = data;
    cfg.output_dir = out;
    cfg.resize_width = 10;
    cfg.resize_height = 10;
    cfg.pca_components = 8;
    cfg.knn_k = 6;
    cfg.kmeans_k = 3;
    cfg.kmeans_n_init = 4;
    cfg.tsne_perplexity = 6.0;
    cfg.tsne_iters = 120;
    cfg.tsne_exaggeration_iters = 30;
    cfg.seed = 1;
    return cfg;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(CLUSKIT_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

}  // namespace

TEST_CASE("empty config text keeps every default") {
    PipelineConfig cfg = parse_config_text("");
    CHECK(cfg == PipelineConfig{});
}

TEST_CASE("config text parses keys, comments, and blanks") {
    const std::string text =
        "# a comment\n"
        "dataset_dir = /data/images\n"
        "\n"
        "resize = 64x48\n"
        "grayscale = false\n"
        "normalization_mode = zscore\n"
        "pca_components = 12\n"
        "knn_k = 9\n"
        "graph_weights = uniform\n"
        "algorithms = kmeanspp\n"
        "kmeans_k = 4\n"
        "seed = 77\n"
        "class_merge = normal:rest,viral:rest\n";
    PipelineConfig cfg = parse_config_text(text);
    CHECK(cfg.dataset_dir == "/data/images");
    CHECK(cfg.resize_width == 64);
    CHECK(cfg.resize_height == 48);
    CHECK_FALSE(cfg.grayscale);
    CHECK(cfg.normalization_mode == NormalizationMode::zscore);
    CHECK(cfg.pca_components == 12);
    CHECK(cfg.knn_k == 9);
    CHECK(cfg.graph_weights == EdgeWeighting::uniform);
    CHECK(cfg.algorithms == std::vector<std::string>{"kmeanspp"});
    CHECK(cfg.kmeans_k == 4);
    CHECK(cfg.seed == 77);
    REQUIRE(cfg.class_merge.size() == 2);
    CHECK(cfg.class_merge[0] == std::pair<std::string, std::string>{"normal", "rest"});
    CHECK(cfg.class_merge[1] == std::pair<std::string, std::string>{"viral", "rest"});
}

TEST_CASE("algorithm order is canonical regardless of input order") {
    PipelineConfig cfg = parse_config_text("algorithms = kmeanspp,rcc\n");
    CHECK(cfg.algorithms == std::vector<std::string>{"rcc", "kmeanspp"});
}

TEST_CASE("unknown keys are rejected by name") {
    CHECK_THROWS_WITH_AS(parse_config_text("no_such_key = 1\n"),
                         doctest::Contains("no_such_key"), std::invalid_argument);
}

TEST_CASE("duplicate keys are rejected") {
    CHECK_THROWS_WITH_AS(parse_config_text("knn_k = 3\nknn_k = 5\n"),
                         doctest::Contains("duplicate"), std::invalid_argument);
}

TEST_CASE("per-key syntax errors name the key") {
    CHECK_THROWS_WITH_AS(parse_config_text("resize = 64\n"), doctest::Contains("resize"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("knn_k = many\n"), doctest::Contains("knn_k"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("grayscale = maybe\n"),
                         doctest::Contains("grayscale"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("algorithms = dbscan\n"),
                         doctest::Contains("algorithms"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("class_merge = broken\n"),
                         doctest::Contains("class_merge"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("class_merge = a:b,a:c\n"),
                         doctest::Contains("class_merge"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("tsne_perplexity = fast\n"),
                         doctest::Contains("tsne_perplexity"), std::invalid_argument);
}

TEST_CASE("validation names the offending key") {
    PipelineConfig cfg;
    cfg.dataset_dir = "/data";
    cfg.kmeans_k = 0;
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("kmeans_k"),
                         std::invalid_argument);
    cfg = {};
    cfg.dataset_dir = "/data";
    cfg.pca_components = 0;
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("pca_components"),
                         std::invalid_argument);
    cfg = {};
    cfg.dataset_dir = "/data";
    cfg.tsne_perplexity = 0.0;
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("tsne_perplexity"),
                         std::invalid_argument);
    cfg = {};
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("dataset_dir"),
                         std::invalid_argument);
    cfg = {};
    cfg.dataset_dir = "/data";
    cfg.algorithms.clear();
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("algorithms"),
                         std::invalid_argument);
}

TEST_CASE("echo round-trips through the parser") {
    PipelineConfig cfg;
    cfg.dataset_dir = "/data/radiography";
    cfg.output_dir = "results";
    cfg.resize_width = 32;
    cfg.resize_height = 24;
    cfg.normalization_mode = NormalizationMode::zscore;
    cfg.graph_weights = EdgeWeighting::uniform;
    cfg.kmeans_k = 2;
    cfg.seed = 99;
    cfg.class_merge = {{"normal", "rest"}, {"viral", "rest"}};
    PipelineConfig back = parse_config_text(echo_config(cfg));
    CHECK(back == cfg);
}

TEST_CASE("artifact list covers every stage output") {
    PipelineConfig cfg;
    cfg.dataset_dir = "/data";
    auto names = pipeline_artifacts(cfg);
    for (const char* expect :
         {"config_resolved.txt", "features.csv", "labels_true.csv", "pca_model.csv",
          "labels_pred_rcc.csv", "labels_pred_kmeanspp.csv", "rcc_trace.csv",
          "kmeans_restarts.json", "embedding.csv", "metrics.json", "scatter_true.svg",
          "scatter_rcc.svg", "scatter_kmeanspp.svg"}) {
        CAPTURE(expect);
        CHECK(std::find(names.begin(), names.end(), expect) != names.end());
    }
}

TEST_CASE("full pipeline produces every artifact") {
    TempDir data("pipe_data"), out("pipe_out");
    write_blob_image_dataset(data.path(), 8, 12, 12, 0);
    PipelineConfig cfg = tiny_config(data.path(), out.path());
    run_pipeline(cfg);

    for (const auto& name : pipeline_artifacts(cfg)) {
        CAPTURE(name);
        CHECK(std::filesystem::exists(out.path() / name));
    }

    // The resolved config is the canonical echo.
    CHECK(slurp(out.path() / "config_resolved.txt") == echo_config(cfg));

    // Ground-truth labels match the directory tree.
    LabelVector truth = read_labels_csv(out.path() / "labels_true.csv");
    CHECK(truth.size() == 24);
    CHECK(truth.class_names == std::vector<std::string>{"blob_a", "blob_b", "blob_c"});

    // Features have one row per image and pca_components columns.
    Matrix features = read_matrix_csv(out.path() / "features.csv");
    CHECK(features.rows() == 24);
    CHECK(features.cols() == 8);

    // The embedding is 2-D with the x,y header.
    Matrix embedding = read_matrix_csv(out.path() / "embedding.csv");
    CHECK(embedding.rows() == 24);
    CHECK(embedding.cols() == 2);
    {
        std::ifstream in(out.path() / "embedding.csv");
        std::string header;
        std::getline(in, header);
        CHECK(header == "x,y");
    }

    // metrics.json carries a block per algorithm with the agreed keys.
    json metrics = json::parse(slurp(out.path() / "metrics.json"));
    for (const char* algo : {"rcc", "kmeanspp"}) {
        CAPTURE(algo);
        REQUIRE(metrics.contains(algo));
        const json& block = metrics.at(algo);
        for (const char* key : {"ami", "mi", "emi", "entropy_a", "entropy_b", "n_clusters",
                                "classes", "confusion", "per_class"}) {
            CAPTURE(key);
            CHECK(block.contains(key));
        }
        CHECK(block.at("classes") == json({"blob_a", "blob_b", "blob_c"}));
        const auto& confusion = block.at("confusion");
        REQUIRE(confusion.size() == 3);        // rows are the true classes
        REQUIRE(confusion.at(0).size() == 3);  // columns are mapped predictions
        const auto& per_class = block.at("per_class");
        REQUIRE(per_class.size() == 3);
        for (const auto& entry : per_class) {
            CHECK(entry.contains("class"));
            CHECK(entry.at("row_truth").contains("sensitivity"));
            CHECK(entry.at("row_truth").contains("specificity"));
            CHECK(entry.at("column_truth").contains("sensitivity"));
            CHECK(entry.at("column_truth").contains("specificity"));
        }
        CHECK(block.at("ami").is_number());
    }

    // The kmeans restart report matches its config.
    json restarts = json::parse(slurp(out.path() / "kmeans_restarts.json"));
    CHECK(restarts.at("restarts").size() == 4);
    CHECK(restarts.contains("best_restart"));
    CHECK(restarts.contains("inertia"));
    CHECK(restarts.contains("iterations"));

    // SVG plots are well-formed enough to carry one circle per sample.
    const std::string svg = slurp(out.path() / "scatter_true.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("ground truth") != std::string::npos);
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
         pos = svg.find("<circle", pos + 1)) {
        ++circles;
    }
    CHECK(circles == 24);
}

TEST_CASE("pipeline reruns are byte-identical") {
    TempDir data("pipe_data"), out_a("pipe_a"), out_b("pipe_b");
    write_blob_image_dataset(data.path(), 6, 12, 12, 3);
    PipelineConfig cfg_a = tiny_config(data.path(), out_a.path());
    cfg_a.tsne_iters = 80;
    PipelineConfig cfg_b = cfg_a;
    cfg_b.output_dir = out_b.path();
    run_pipeline(cfg_a);
    run_pipeline(cfg_b);
    for (const char* name : {"labels_true.csv", "labels_pred_rcc.csv",
                             "labels_pred_kmeanspp.csv", "metrics.json", "features.csv",
                             "embedding.csv", "rcc_trace.csv", "kmeans_restarts.json"}) {
        CAPTURE(name);
        CHECK(slurp(out_a.path() / name) == slurp(out_b.path() / name));
    }
}

TEST_CASE("a stage failure names the stage and removes its outputs") {
    TempDir out("pipe_fail");
    PipelineConfig cfg;
    cfg.dataset_dir = "/tmp";  // irrelevant: cluster reads only output_dir
    cfg.output_dir = out.path();
    // No ingest ran, so features.csv is missing and the stage must fail.
    CHECK_THROWS_WITH_AS(run_cluster(cfg), doctest::Contains("cluster:"), std::runtime_error);
    CHECK_FALSE(std::filesystem::exists(out.path() / "labels_pred_rcc.csv"));
    CHECK_FALSE(std::filesystem::exists(out.path() / "labels_pred_kmeanspp.csv"));
    CHECK_FALSE(std::filesystem::exists(out.path() / "rcc_trace.csv"));
}

TEST_CASE("a failed pipeline removes every artifact of the run") {
    TempDir data("pipe_data"), out("pipe_out");
    std::filesystem::create_directories(data / "only_class");
    write_blob_image_dataset(data.path(), 2, 8, 8, 0);  // adds three usable classes
    PipelineConfig cfg = tiny_config(data.path(), out.path());
    // only_class is empty, so ingest fails after the output dir exists.
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);
    CHECK_FALSE(std::filesystem::exists(out.path() / "config_resolved.txt"));
    CHECK_FALSE(std::filesystem::exists(out.path() / "features.csv"));
}

TEST_CASE("scatter rendering escapes markup and survives empty input") {
    Matrix empty(0, 2);
    std::string svg = render_scatter(empty, {}, {"a<b&c"}, "t\"itle");
    CHECK(svg.find("a&lt;b&amp;c") != std::string::npos);
    CHECK(svg.find("t&quot;itle") != std::string::npos);
    CHECK(svg.find("<svg") != std::string::npos);

    Matrix flat(2, 2);
    flat << 1.0, 2.0, 1.0, 2.0;  // zero span in both axes
    std::string degenerate = render_scatter(flat, {0, 0}, {"only"}, "flat");
    CHECK(degenerate.find("<circle") != std::string::npos);
}

TEST_CASE("cli: run exits zero and writes artifacts") {
    TempDir data("cli_data"), out("cli_out"), scratch("cli_cfg");
    write_blob_image_dataset(data.path(), 6, 12, 12, 0);
    PipelineConfig cfg = tiny_config(data.path(), out.path());
    cfg.tsne_iters = 60;
    std::ofstream(scratch / "run.cfg") << echo_config(cfg);
    CHECK(run_tool("pipeline --config " + (scratch / "run.cfg").string()) == 0);
    CHECK(std::filesystem::exists(out.path() / "metrics.json"));
}

TEST_CASE("cli: validation failures exit 1") {
    TempDir scratch("cli_cfg");
    std::ofstream(scratch / "bad.cfg") << "knn_k = 0\n";
    CHECK(run_tool("pipeline --config " + (scratch / "bad.cfg").string()) == 1);
    CHECK(run_tool("pipeline --config " + (scratch / "missing.cfg").string()) == 1);
    std::ofstream(scratch / "unknown.cfg") << "qwerty = 1\n";
    CHECK(run_tool("pipeline --config " + (scratch / "unknown.cfg").string()) == 1);
}

TEST_CASE("cli: runtime failures exit 2") {
    TempDir scratch("cli_cfg"), out("cli_out");
    // Valid config, but the cluster stage cannot find its inputs.
    std::ofstream(scratch / "cfg.cfg") << "dataset_dir = " << scratch.path().string()
                                       << "\noutput_dir = " << out.path().string() << "\n";
    CHECK(run_tool("cluster --config " + (scratch / "cfg.cfg").string()) == 2);
}

TEST_CASE("cli: overrides replace config values") {
    TempDir data("cli_data"), out_cfg("cli_a"), out_flag("cli_b"), scratch("cli_cfg");
    write_blob_image_dataset(data.path(), 6, 12, 12, 1);
    PipelineConfig cfg = tiny_config(data.path(), out_cfg.path());
    std::ofstream(scratch / "run.cfg") << echo_config(cfg);
    CHECK(run_tool("ingest --config " + (scratch / "run.cfg").string() + " --output-dir " +
                   out_flag.path().string() + " --seed 123") == 0);
    CHECK(std::filesystem::exists(out_flag.path() / "features.csv"));
    CHECK_FALSE(std::filesystem::exists(out_cfg.path() / "features.csv"));
    const std::string resolved = slurp(out_flag.path() / "config_resolved.txt");
    CHECK(resolved.find("seed = 123") != std::string::npos);
}

TEST_CASE("cli: toy subcommand writes a loadable dataset") {
    TempDir dir("cli_toy");
    CHECK(run_tool("toy --out " + (dir / "ds").string() + " --per-class 3 --width 10") == 0);
    IngestConfig cfg;
    cfg.root_dir = dir / "ds";
    cfg.resize_width = cfg.resize_height = 8;
    auto [x, labels] = load_image_dataset(cfg);
    CHECK(x.rows() == 9);
}

TEST_CASE("cli: unknown flags exit nonzero") {
    CHECK(run_tool("pipeline --bogus-flag") != 0);
    CHECK(run_tool("") != 0);  // a subcommand is required
}
