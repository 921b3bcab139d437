#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cluskit {

/// Dense feature matrix: one row per sample, one column per feature.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Integer class assignment for a sample set, with index-aligned class names.
struct LabelVector {
    std::vector<int> labels;               ///< class index per sample, each in [0, n_classes())
    std::vector<std::string> class_names;  ///< one entry per class

    int n_classes() const { return static_cast<int>(class_names.size()); }
    std::size_t size() const { return labels.size(); }

    /// Throws std::invalid_argument if no class exists or a label is out of range.
    void validate() const;
};

/// Output of a clustering run: a compact cluster index per sample plus solver metadata.
struct ClusteringResult {
    std::vector<int> labels;  ///< cluster index per sample, each in [0, n_clusters)
    int n_clusters = 0;
    std::string algorithm;
    std::map<std::string, double> stats;
};

/// Throws std::invalid_argument unless x is nonempty and every entry is finite.
void check_matrix_finite(const Matrix& x, const std::string& what);

}  // namespace cluskit
