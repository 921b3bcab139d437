#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace cluskit {

/// 8-bit image with interleaved channels (1 = grayscale, 3 = RGB).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;  ///< row-major, size width*height*channels

    std::uint8_t at(int y, int x, int c = 0) const {
        return pixels[static_cast<std::size_t>((y * width + x) * channels + c)];
    }
};

/// Decodes a PNG or JPEG file, detected by magic bytes. Palette, 16-bit, and
/// alpha PNG variants are folded down to 8-bit gray or RGB. Throws
/// std::runtime_error naming the path when the file cannot be decoded and
/// std::invalid_argument for unsupported formats.
Image decode_image(const std::filesystem::path& path);

/// Writes a single-channel image as an 8-bit grayscale PNG.
void write_png_gray(const Image& img, const std::filesystem::path& path);

/// Rec.601 luma conversion; grayscale input is returned unchanged.
Image to_grayscale(const Image& img);

/// Area-averaging resize: each output pixel is the overlap-weighted mean of
/// the source pixels it covers, exact for any scale factor.
Image resize_area(const Image& img, int out_width, int out_height);

}  // namespace cluskit
