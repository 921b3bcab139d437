#include "cluskit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace cluskit {

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path.string());
    }
    return in;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view cell) {
    if (cell.empty()) {
        throw std::invalid_argument("empty numeric cell");
    }
    double value = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw std::invalid_argument("malformed numeric cell '" + std::string(cell) + "'");
    }
    if (!std::isfinite(value)) {
        throw std::invalid_argument("non-finite numeric cell '" + std::string(cell) + "'");
    }
    return value;
}

void write_matrix_csv(const Matrix& x, const std::filesystem::path& path,
                      const std::vector<std::string>& header) {
    if (!header.empty() && static_cast<Eigen::Index>(header.size()) != x.cols()) {
        throw std::invalid_argument("header size does not match column count");
    }
    auto out = open_out(path);
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        if (c > 0) out << ',';
        if (header.empty()) {
            out << 'c' << c;
        } else {
            out << header[static_cast<std::size_t>(c)];
        }
    }
    out << '\n';
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            if (c > 0) out << ',';
            out << format_double(x(r, c));
        }
        out << '\n';
    }
    finish_write(out, path);
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("missing header row: " + path.string());
    }
    strip_cr(line);
    const std::size_t n_cols = split_cells(line).size();

    std::vector<double> values;
    std::size_t n_rows = 0;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) {
            break;
        }
        auto cells = split_cells(line);
        if (cells.size() != n_cols) {
            throw std::invalid_argument("ragged row " + std::to_string(n_rows) + " in " +
                                        path.string());
        }
        for (auto cell : cells) {
            try {
                values.push_back(parse_double(cell));
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(std::string(e.what()) + " at row " +
                                            std::to_string(n_rows) + " in " + path.string());
            }
        }
        ++n_rows;
    }

    Matrix x(n_rows, n_cols);
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * n_cols + c];
        }
    }
    return x;
}

void write_labels_csv(const LabelVector& labels, const std::filesystem::path& path) {
    labels.validate();
    for (const auto& name : labels.class_names) {
        if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos) {
            throw std::invalid_argument("class name contains a delimiter: " + name);
        }
    }
    auto out = open_out(path);
    out << "index,label,class_name\n";
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        out << i << ',' << labels.labels[i] << ','
            << labels.class_names[static_cast<std::size_t>(labels.labels[i])] << '\n';
    }
    finish_write(out, path);
}

LabelVector read_labels_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("missing header row: " + path.string());
    }

    LabelVector result;
    std::size_t expected_index = 0;
    int max_label = -1;
    std::vector<std::pair<int, std::string>> seen;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) {
            break;
        }
        auto cells = split_cells(line);
        if (cells.size() != 3) {
            throw std::invalid_argument("labels row needs 3 cells at line " +
                                        std::to_string(expected_index + 2) + " in " +
                                        path.string());
        }
        long index = 0;
        auto res = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), index);
        if (res.ec != std::errc{} || res.ptr != cells[0].data() + cells[0].size()) {
            throw std::invalid_argument("malformed index cell in " + path.string());
        }
        if (static_cast<std::size_t>(index) != expected_index) {
            throw std::invalid_argument("index gap at row " + std::to_string(expected_index) +
                                        " in " + path.string());
        }
        int label = 0;
        res = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), label);
        if (res.ec != std::errc{} || res.ptr != cells[1].data() + cells[1].size() || label < 0) {
            throw std::invalid_argument("malformed label cell in " + path.string());
        }
        result.labels.push_back(label);
        max_label = std::max(max_label, label);
        seen.emplace_back(label, std::string(cells[2]));
        ++expected_index;
    }
    if (result.labels.empty()) {
        throw std::invalid_argument("labels file has no rows: " + path.string());
    }

    result.class_names.assign(static_cast<std::size_t>(max_label) + 1, std::string());
    std::vector<bool> named(result.class_names.size(), false);
    for (const auto& [label, name] : seen) {
        auto idx = static_cast<std::size_t>(label);
        if (named[idx] && result.class_names[idx] != name) {
            throw std::invalid_argument("conflicting names for class " + std::to_string(label) +
                                        " in " + path.string());
        }
        result.class_names[idx] = name;
        named[idx] = true;
    }
    for (std::size_t c = 0; c < named.size(); ++c) {
        if (!named[c]) {
            throw std::invalid_argument("no samples for class " + std::to_string(c) + " in " +
                                        path.string());
        }
    }
    result.validate();
    return result;
}

}  // namespace cluskit
