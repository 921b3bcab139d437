#pragma once

#include "cluskit/types.hpp"

#include <string>
#include <vector>

namespace cluskit {

/// Renders a 2-D embedding as a self-contained SVG scatter plot: one circle
/// per row, colored by label, with a legend of class names. Output is
/// deterministic for identical input. An empty embedding yields a valid SVG
/// holding only the legend.
std::string render_scatter(const Matrix& embedding, const std::vector<int>& labels,
                           const std::vector<std::string>& class_names,
                           const std::string& title = "");

}  // namespace cluskit
