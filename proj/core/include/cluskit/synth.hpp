#pragma once

#include <cstdint>
#include <filesystem>

namespace cluskit {

/// Writes a small synthetic image dataset in the directory-per-class layout:
/// three classes of grayscale PNGs, each a Gaussian bright blob at a
/// class-specific position with mild per-image jitter and noise. Useful for
/// exercising the full pipeline without external data.
void write_blob_image_dataset(const std::filesystem::path& dir, int per_class = 30,
                              int width = 16, int height = 16, std::uint64_t seed = 0);

}  // namespace cluskit
