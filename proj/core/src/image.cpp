#include "cluskit/image.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cluskit {

namespace {

struct FileHandle {
    std::FILE* fp = nullptr;

    explicit FileHandle(const std::filesystem::path& path, const char* mode)
        : fp(std::fopen(path.string().c_str(), mode)) {}
    ~FileHandle() {
        if (fp) {
            std::fclose(fp);
        }
    }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;
};

Image decode_png_file(std::FILE* fp, const std::filesystem::path& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) {
            png_destroy_read_struct(&png, &info, nullptr);
        }
        throw std::runtime_error("png decoder setup failed: " + path.string());
    }

    Image img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("undecodable image: " + path.string());
    }

    png_init_io(png, fp);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte bit_depth = png_get_bit_depth(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
    }
    if (bit_depth == 16) {
        png_set_strip_16(png);
    }
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.channels = static_cast<int>(png_get_channels(png, info));
    if (img.channels != 1 && img.channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("unsupported png channel count in " + path.string());
    }

    const std::size_t stride = static_cast<std::size_t>(img.width) *
                               static_cast<std::size_t>(img.channels);
    img.pixels.resize(stride * static_cast<std::size_t>(img.height));
    rows.resize(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        rows[static_cast<std::size_t>(y)] = img.pixels.data() + static_cast<std::size_t>(y) * stride;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

struct JpegErrorContext {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
};

void jpeg_error_exit_hook(j_common_ptr cinfo) {
    auto* ctx = reinterpret_cast<JpegErrorContext*>(cinfo->err);
    std::longjmp(ctx->jump, 1);
}

Image decode_jpeg_file(std::FILE* fp, const std::filesystem::path& path) {
    jpeg_decompress_struct cinfo;
    JpegErrorContext err;
    cinfo.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_error_exit_hook;

    Image img;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw std::runtime_error("undecodable image: " + path.string());
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp);
    jpeg_read_header(&cinfo, TRUE);
    jpeg_start_decompress(&cinfo);

    img.width = static_cast<int>(cinfo.output_width);
    img.height = static_cast<int>(cinfo.output_height);
    img.channels = cinfo.output_components;
    if (img.channels != 1 && img.channels != 3) {
        jpeg_destroy_decompress(&cinfo);
        throw std::runtime_error("unsupported jpeg channel count in " + path.string());
    }

    const std::size_t stride = static_cast<std::size_t>(img.width) *
                               static_cast<std::size_t>(img.channels);
    img.pixels.resize(stride * static_cast<std::size_t>(img.height));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = img.pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

}  // namespace

Image decode_image(const std::filesystem::path& path) {
    FileHandle file(path, "rb");
    if (!file.fp) {
        throw std::runtime_error("cannot open image: " + path.string());
    }
    unsigned char magic[3] = {0, 0, 0};
    const std::size_t got = std::fread(magic, 1, sizeof(magic), file.fp);
    std::rewind(file.fp);
    if (got == sizeof(magic) && magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N') {
        return decode_png_file(file.fp, path);
    }
    if (got == sizeof(magic) && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) {
        return decode_jpeg_file(file.fp, path);
    }
    throw std::invalid_argument("unsupported image format: " + path.string());
}

void write_png_gray(const Image& img, const std::filesystem::path& path) {
    if (img.channels != 1) {
        throw std::invalid_argument("write_png_gray needs a single-channel image");
    }
    if (img.width < 1 || img.height < 1 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) *
                                 static_cast<std::size_t>(img.height)) {
        throw std::invalid_argument("write_png_gray: inconsistent image buffer");
    }
    FileHandle file(path, "wb");
    if (!file.fp) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) {
            png_destroy_write_struct(&png, &info);
        }
        throw std::runtime_error("png encoder setup failed: " + path.string());
    }
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png write failed: " + path.string());
    }
    png_init_io(png, file.fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    rows.resize(static_cast<std::size_t>(img.height));
    for (int y = 0; y < img.height; ++y) {
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(
            img.pixels.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width));
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image to_grayscale(const Image& img) {
    if (img.channels == 1) {
        return img;
    }
    if (img.channels != 3) {
        throw std::invalid_argument("to_grayscale expects 1 or 3 channels");
    }
    Image out;
    out.width = img.width;
    out.height = img.height;
    out.channels = 1;
    out.pixels.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height));
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        const double r = img.pixels[3 * i];
        const double g = img.pixels[3 * i + 1];
        const double b = img.pixels[3 * i + 2];
        const double luma = 0.299 * r + 0.587 * g + 0.114 * b;
        out.pixels[i] = static_cast<std::uint8_t>(
            std::min(255.0, std::max(0.0, std::round(luma))));
    }
    return out;
}

namespace {

// One axis of the separable area average: resamples `in_size` samples spaced
// `stride` apart into `out_size`, weighting each source cell by its overlap
// with the destination interval.
void resample_axis(const double* in, int in_size, std::ptrdiff_t in_stride, double* out,
                   int out_size, std::ptrdiff_t out_stride) {
    const double scale = static_cast<double>(in_size) / static_cast<double>(out_size);
    for (int o = 0; o < out_size; ++o) {
        const double lo = o * scale;
        const double hi = (o + 1) * scale;
        double acc = 0.0;
        const int first = static_cast<int>(lo);
        const int last = std::min(in_size - 1, static_cast<int>(std::ceil(hi)) - 1);
        for (int s = first; s <= last; ++s) {
            const double overlap =
                std::min(hi, static_cast<double>(s + 1)) - std::max(lo, static_cast<double>(s));
            if (overlap > 0.0) {
                acc += overlap * in[s * in_stride];
            }
        }
        out[o * out_stride] = acc / (hi - lo);
    }
}

}  // namespace

Image resize_area(const Image& img, int out_width, int out_height) {
    if (out_width < 1 || out_height < 1) {
        throw std::invalid_argument("resize_area needs positive output dimensions");
    }
    if (img.width < 1 || img.height < 1 ||
        img.pixels.size() != static_cast<std::size_t>(img.width) *
                                 static_cast<std::size_t>(img.height) *
                                 static_cast<std::size_t>(img.channels)) {
        throw std::invalid_argument("resize_area: inconsistent image buffer");
    }

    const int c = img.channels;
    std::vector<double> src(img.pixels.begin(), img.pixels.end());
    // Horizontal pass: width -> out_width, height unchanged.
    std::vector<double> mid(static_cast<std::size_t>(out_width) *
                            static_cast<std::size_t>(img.height) * static_cast<std::size_t>(c));
    for (int y = 0; y < img.height; ++y) {
        for (int ch = 0; ch < c; ++ch) {
            resample_axis(src.data() + (static_cast<std::ptrdiff_t>(y) * img.width) * c + ch,
                          img.width, c,
                          mid.data() + (static_cast<std::ptrdiff_t>(y) * out_width) * c + ch,
                          out_width, c);
        }
    }
    // Vertical pass: height -> out_height.
    std::vector<double> dst(static_cast<std::size_t>(out_width) *
                            static_cast<std::size_t>(out_height) * static_cast<std::size_t>(c));
    const std::ptrdiff_t mid_row = static_cast<std::ptrdiff_t>(out_width) * c;
    for (int x = 0; x < out_width; ++x) {
        for (int ch = 0; ch < c; ++ch) {
            resample_axis(mid.data() + static_cast<std::ptrdiff_t>(x) * c + ch, img.height,
                          mid_row, dst.data() + static_cast<std::ptrdiff_t>(x) * c + ch,
                          out_height, mid_row);
        }
    }

    Image out;
    out.width = out_width;
    out.height = out_height;
    out.channels = c;
    out.pixels.resize(dst.size());
    for (std::size_t i = 0; i < dst.size(); ++i) {
        out.pixels[i] = static_cast<std::uint8_t>(
            std::min(255.0, std::max(0.0, std::round(dst[i]))));
    }
    return out;
}

}  // namespace cluskit
