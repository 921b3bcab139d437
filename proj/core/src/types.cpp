#include "cluskit/types.hpp"

#include <stdexcept>

namespace cluskit {

void LabelVector::validate() const {
    if (class_names.empty()) {
        throw std::invalid_argument("label vector has no classes");
    }
    const int n = n_classes();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= n) {
            throw std::invalid_argument("label out of range at sample " + std::to_string(i));
        }
    }
}

void check_matrix_finite(const Matrix& x, const std::string& what) {
    if (x.rows() == 0 || x.cols() == 0) {
        throw std::invalid_argument(what + ": matrix is empty");
    }
    if (!x.allFinite()) {
        throw std::invalid_argument(what + ": matrix has non-finite entries");
    }
}

}  // namespace cluskit
