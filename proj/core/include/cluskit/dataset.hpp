#pragma once

#include "cluskit/types.hpp"

#include <filesystem>
#include <string>
#include <utility>

namespace cluskit {

/// Feature scaling applied after dimensionality reduction.
enum class NormalizationMode { none, global_norm, zscore };

NormalizationMode parse_normalization_mode(const std::string& s);
std::string to_string(NormalizationMode mode);

struct IngestConfig {
    std::filesystem::path root_dir;
    int resize_width = 128;
    int resize_height = 128;
    bool grayscale = true;
    /// Carried for consumers; the loader itself returns raw [0, 1] pixels and
    /// normalization is applied downstream.
    NormalizationMode normalization_mode = NormalizationMode::global_norm;
};

/// Loads a directory-per-class image tree. Each immediate subdirectory of
/// root_dir is one class (alphabetical rank gives the class index) and must
/// hold at least one PNG or JPEG file; rows follow lexicographic filename
/// order within a class. Images are grayscale-converted (when requested),
/// resized, flattened row-major, and scaled to [0, 1]. Color output
/// replicates single-channel sources to three channels so widths agree.
std::pair<Matrix, LabelVector> load_image_dataset(const IngestConfig& cfg);

/// none: identity. global_norm: divides by the mean row norm (identity when
/// that mean is zero). zscore: per-column (x - mean) / stddev with the
/// population (divide-by-N) variance; constant columns map to zero.
Matrix normalize(const Matrix& x, NormalizationMode mode);

/// Renames classes according to `merge` (old name -> new name), merging
/// classes that share a target. Resulting classes are ordered
/// alphabetically. Source names absent from the data are an error.
LabelVector merge_classes(const LabelVector& labels,
                          const std::vector<std::pair<std::string, std::string>>& merge);

}  // namespace cluskit
