#include "cluskit/pca.hpp"

#include <Eigen/SVD>

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cluskit/csv.hpp"

namespace cluskit {

PcaModel pca_fit(const Matrix& x, int k) {
    check_matrix_finite(x, "pca_fit");
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    if (n < 2) {
        throw std::invalid_argument("pca_fit needs at least 2 samples");
    }
    if (k < 1 || k > std::min(n, d)) {
        throw std::invalid_argument("pca_fit: k must be in [1, min(N, D)], got " +
                                    std::to_string(k));
    }

    PcaModel model;
    model.mean = x.colwise().mean();
    const Matrix centered = x.rowwise() - model.mean.transpose();

    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    model.components = svd.matrixV().leftCols(k).transpose();
    model.explained_variance =
        svd.singularValues().head(k).array().square() / static_cast<double>(n - 1);

    // Deterministic sign: the largest-magnitude entry of each component is
    // positive; on magnitude ties the lowest feature index decides.
    for (Eigen::Index r = 0; r < model.components.rows(); ++r) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index c = 0; c < d; ++c) {
            const double mag = std::abs(model.components(r, c));
            if (mag > best) {
                best = mag;
                arg = c;
            }
        }
        if (model.components(r, arg) < 0.0) {
            model.components.row(r) = -model.components.row(r);
        }
    }
    return model;
}

namespace {

void check_model(const PcaModel& model) {
    if (model.components.rows() == 0 || model.components.cols() == 0) {
        throw std::invalid_argument("pca model is empty");
    }
    if (model.mean.size() != model.components.cols()) {
        throw std::invalid_argument("pca model mean length does not match components");
    }
    if (model.explained_variance.size() != model.components.rows()) {
        throw std::invalid_argument("pca model variance length does not match components");
    }
}

}  // namespace

Matrix pca_transform(const PcaModel& model, const Matrix& x) {
    check_model(model);
    check_matrix_finite(x, "pca_transform");
    if (x.cols() != model.n_features()) {
        throw std::invalid_argument("pca_transform: input has " + std::to_string(x.cols()) +
                                    " features, model expects " +
                                    std::to_string(model.n_features()));
    }
    return (x.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Matrix pca_inverse_transform(const PcaModel& model, const Matrix& y) {
    check_model(model);
    check_matrix_finite(y, "pca_inverse_transform");
    if (y.cols() != model.n_components()) {
        throw std::invalid_argument("pca_inverse_transform: input has " +
                                    std::to_string(y.cols()) + " columns, model expects " +
                                    std::to_string(model.n_components()));
    }
    return (y * model.components).rowwise() + model.mean.transpose();
}

void write_pca_model_csv(const PcaModel& model, const std::filesystem::path& path) {
    check_model(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    auto write_row = [&out](const auto& row, Eigen::Index size) {
        for (Eigen::Index i = 0; i < size; ++i) {
            if (i > 0) out << ',';
            out << format_double(row(i));
        }
        out << '\n';
    };
    write_row(model.mean, model.mean.size());
    for (Eigen::Index r = 0; r < model.components.rows(); ++r) {
        write_row(model.components.row(r), model.components.cols());
    }
    write_row(model.explained_variance, model.explained_variance.size());
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

PcaModel read_pca_model_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path.string());
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) {
            break;
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = line.find(',', start);
            std::string_view cell(line.data() + start,
                                  (pos == std::string::npos ? line.size() : pos) - start);
            row.push_back(parse_double(cell));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 3) {
        throw std::invalid_argument("pca model file needs mean, components, and variance rows: " +
                                    path.string());
    }

    const std::size_t d = rows.front().size();
    const std::size_t k = rows.size() - 2;
    PcaModel model;
    model.mean = Eigen::Map<const Vector>(rows.front().data(), static_cast<Eigen::Index>(d));
    model.components.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < k; ++r) {
        if (rows[r + 1].size() != d) {
            throw std::invalid_argument("ragged component row in " + path.string());
        }
        model.components.row(static_cast<Eigen::Index>(r)) =
            Eigen::Map<const Vector>(rows[r + 1].data(), static_cast<Eigen::Index>(d));
    }
    if (rows.back().size() != k) {
        throw std::invalid_argument("variance row length does not match component count in " +
                                    path.string());
    }
    model.explained_variance =
        Eigen::Map<const Vector>(rows.back().data(), static_cast<Eigen::Index>(k));
    check_model(model);
    return model;
}

}  // namespace cluskit
