#include "cluskit/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cluskit/image.hpp"

namespace cluskit {

NormalizationMode parse_normalization_mode(const std::string& s) {
    if (s == "none") return NormalizationMode::none;
    if (s == "global-norm") return NormalizationMode::global_norm;
    if (s == "zscore") return NormalizationMode::zscore;
    throw std::invalid_argument("unknown normalization mode '" + s + "'");
}

std::string to_string(NormalizationMode mode) {
    switch (mode) {
        case NormalizationMode::none: return "none";
        case NormalizationMode::global_norm: return "global-norm";
        case NormalizationMode::zscore: return "zscore";
    }
    throw std::invalid_argument("invalid normalization mode value");
}

namespace {

bool has_image_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

Image replicate_to_rgb(const Image& img) {
    if (img.channels == 3) {
        return img;
    }
    Image out;
    out.width = img.width;
    out.height = img.height;
    out.channels = 3;
    out.pixels.resize(img.pixels.size() * 3);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        out.pixels[3 * i] = img.pixels[i];
        out.pixels[3 * i + 1] = img.pixels[i];
        out.pixels[3 * i + 2] = img.pixels[i];
    }
    return out;
}

}  // namespace

std::pair<Matrix, LabelVector> load_image_dataset(const IngestConfig& cfg) {
    namespace fs = std::filesystem;
    if (cfg.resize_width < 1 || cfg.resize_height < 1) {
        throw std::invalid_argument("ingest: resize dimensions must be positive");
    }
    if (!fs::is_directory(cfg.root_dir)) {
        throw std::invalid_argument("ingest: missing dataset directory " + cfg.root_dir.string());
    }

    std::vector<std::string> class_dirs;
    for (const auto& entry : fs::directory_iterator(cfg.root_dir)) {
        if (entry.is_directory()) {
            class_dirs.push_back(entry.path().filename().string());
        }
    }
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty()) {
        throw std::invalid_argument("ingest: no class subdirectories in " +
                                    cfg.root_dir.string());
    }

    LabelVector labels;
    labels.class_names = class_dirs;
    std::vector<std::pair<fs::path, int>> files;
    for (std::size_t cls = 0; cls < class_dirs.size(); ++cls) {
        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(cfg.root_dir / class_dirs[cls])) {
            if (!entry.is_regular_file()) {
                continue;
            }
            if (!has_image_extension(entry.path())) {
                throw std::invalid_argument("ingest: unsupported image format: " +
                                            entry.path().string());
            }
            names.push_back(entry.path().filename().string());
        }
        if (names.empty()) {
            throw std::invalid_argument("ingest: class '" + class_dirs[cls] + "' has no images");
        }
        std::sort(names.begin(), names.end());
        for (const auto& name : names) {
            files.emplace_back(cfg.root_dir / class_dirs[cls] / name, static_cast<int>(cls));
        }
    }

    const int out_channels = cfg.grayscale ? 1 : 3;
    const Eigen::Index dim = static_cast<Eigen::Index>(cfg.resize_width) *
                             static_cast<Eigen::Index>(cfg.resize_height) * out_channels;
    Matrix x(static_cast<Eigen::Index>(files.size()), dim);
    for (std::size_t i = 0; i < files.size(); ++i) {
        Image img = decode_image(files[i].first);
        img = cfg.grayscale ? to_grayscale(img) : replicate_to_rgb(img);
        img = resize_area(img, cfg.resize_width, cfg.resize_height);
        for (std::size_t p = 0; p < img.pixels.size(); ++p) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) =
                static_cast<double>(img.pixels[p]) / 255.0;
        }
        labels.labels.push_back(files[i].second);
    }
    labels.validate();
    return {std::move(x), std::move(labels)};
}

Matrix normalize(const Matrix& x, NormalizationMode mode) {
    check_matrix_finite(x, "normalize");
    switch (mode) {
        case NormalizationMode::none:
            return x;
        case NormalizationMode::global_norm: {
            const double mean_norm = x.rowwise().norm().mean();
            if (mean_norm == 0.0) {
                return x;
            }
            return x / mean_norm;
        }
        case NormalizationMode::zscore: {
            Matrix out = x;
            const double n = static_cast<double>(x.rows());
            for (Eigen::Index c = 0; c < x.cols(); ++c) {
                const double mean = x.col(c).mean();
                const double var = (x.col(c).array() - mean).square().sum() / n;
                out.col(c).array() -= mean;
                if (var > 0.0) {
                    out.col(c) /= std::sqrt(var);
                }
            }
            return out;
        }
    }
    throw std::invalid_argument("invalid normalization mode value");
}

LabelVector merge_classes(const LabelVector& labels,
                          const std::vector<std::pair<std::string, std::string>>& merge) {
    labels.validate();
    if (merge.empty()) {
        return labels;
    }
    std::map<std::string, std::string> rename(merge.begin(), merge.end());
    for (const auto& [from, to] : rename) {
        if (std::find(labels.class_names.begin(), labels.class_names.end(), from) ==
            labels.class_names.end()) {
            throw std::invalid_argument("class_merge source '" + from + "' not in dataset");
        }
        if (to.empty()) {
            throw std::invalid_argument("class_merge target for '" + from + "' is empty");
        }
    }

    std::vector<std::string> target(labels.class_names.size());
    for (std::size_t c = 0; c < labels.class_names.size(); ++c) {
        auto it = rename.find(labels.class_names[c]);
        target[c] = it == rename.end() ? labels.class_names[c] : it->second;
    }

    LabelVector out;
    out.class_names = target;
    std::sort(out.class_names.begin(), out.class_names.end());
    out.class_names.erase(std::unique(out.class_names.begin(), out.class_names.end()),
                          out.class_names.end());

    std::vector<int> remap(labels.class_names.size());
    for (std::size_t c = 0; c < target.size(); ++c) {
        remap[c] = static_cast<int>(
            std::find(out.class_names.begin(), out.class_names.end(), target[c]) -
            out.class_names.begin());
    }
    out.labels.reserve(labels.labels.size());
    for (int l : labels.labels) {
        out.labels.push_back(remap[static_cast<std::size_t>(l)]);
    }
    out.validate();
    return out;
}

}  // namespace cluskit
