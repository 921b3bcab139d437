#pragma once

#include "cluskit/rng.hpp"
#include "cluskit/types.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cluskit::testsupport {

/// Isotropic Gaussian blobs on scaled coordinate axes: class c is centered at
/// separation * e_c. Rows are grouped by class.
inline std::pair<Matrix, std::vector<int>> make_blobs(int per_class, int dims, int n_classes,
                                                      double separation, double sigma,
                                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix x(static_cast<Eigen::Index>(per_class) * n_classes, dims);
    std::vector<int> truth;
    truth.reserve(x.rows());
    for (int c = 0; c < n_classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            const Eigen::Index row = static_cast<Eigen::Index>(c) * per_class + i;
            for (int j = 0; j < dims; ++j) {
                x(row, j) = (j == c ? separation : 0.0) + sigma * gaussian(rng);
            }
            truth.push_back(c);
        }
    }
    return {std::move(x), std::move(truth)};
}

/// Unique scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        for (int attempt = 0;; ++attempt) {
            auto candidate = base / (tag + "_" + std::to_string(rd()) + "_" +
                                     std::to_string(counter_++) + "_" + std::to_string(attempt));
            std::error_code ec;
            if (std::filesystem::create_directories(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

}  // namespace cluskit::testsupport
