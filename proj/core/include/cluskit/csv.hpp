#pragma once

#include "cluskit/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cluskit {

/// Shortest decimal string that round-trips the exact double value.
std::string format_double(double v);

/// Parses a full cell as a finite double. Throws std::invalid_argument on
/// malformed input, trailing characters, or non-finite values.
double parse_double(std::string_view cell);

/// Writes a matrix as CSV with a single header row. Column names default to
/// c0,c1,... when `header` is empty; otherwise `header` must match the column
/// count. Values use shortest round-trip formatting so reads are lossless.
void write_matrix_csv(const Matrix& x, const std::filesystem::path& path,
                      const std::vector<std::string>& header = {});

/// Reads a matrix written by write_matrix_csv. The header row is skipped.
/// Throws std::invalid_argument on ragged rows, junk cells, or non-finite
/// values, and std::runtime_error when the file cannot be opened.
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Writes labels as CSV rows "index,label,class_name" with that header.
void write_labels_csv(const LabelVector& labels, const std::filesystem::path& path);

/// Reads a labels CSV. Rows must cover indices 0..N-1 in order, every class
/// in [0, max_label] must appear, and a class must map to a single name.
LabelVector read_labels_csv(const std::filesystem::path& path);

}  // namespace cluskit
