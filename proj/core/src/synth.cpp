#include "cluskit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "cluskit/image.hpp"
#include "cluskit/rng.hpp"

namespace cluskit {

void write_blob_image_dataset(const std::filesystem::path& dir, int per_class, int width,
                              int height, std::uint64_t seed) {
    if (per_class < 1 || width < 4 || height < 4) {
        throw std::invalid_argument("write_blob_image_dataset: degenerate dimensions");
    }
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    struct ClassSpec {
        const char* name;
        double cx;
        double cy;
    };
    const ClassSpec classes[] = {
        {"blob_a", 0.27, 0.30},
        {"blob_b", 0.74, 0.38},
        {"blob_c", 0.45, 0.76},
    };

    std::mt19937_64 rng(seed);
    const double sigma = 0.16;
    for (const ClassSpec& spec : classes) {
        const fs::path class_dir = dir / spec.name;
        fs::create_directories(class_dir);
        for (int i = 0; i < per_class; ++i) {
            const double cx = (spec.cx + 0.04 * gaussian(rng)) * width;
            const double cy = (spec.cy + 0.04 * gaussian(rng)) * height;
            const double sx = sigma * width;
            const double sy = sigma * height;

            Image img;
            img.width = width;
            img.height = height;
            img.channels = 1;
            img.pixels.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
            for (int y = 0; y < height; ++y) {
                for (int x = 0; x < width; ++x) {
                    const double dx = (x + 0.5 - cx) / sx;
                    const double dy = (y + 0.5 - cy) / sy;
                    double v = 235.0 * std::exp(-0.5 * (dx * dx + dy * dy));
                    v += 8.0 * gaussian(rng);
                    v = std::min(255.0, std::max(0.0, v));
                    img.pixels[static_cast<std::size_t>(y * width + x)] =
                        static_cast<std::uint8_t>(std::lround(v));
                }
            }

            char name[32];
            std::snprintf(name, sizeof(name), "img_%04d.png", i);
            write_png_gray(img, class_dir / name);
        }
    }
}

}  // namespace cluskit
