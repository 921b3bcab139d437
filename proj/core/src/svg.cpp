#include "cluskit/svg.hpp"

#include <sstream>
#include <stdexcept>

#include "cluskit/csv.hpp"

namespace cluskit {

namespace {

constexpr int kPlotWidth = 640;
constexpr int kPlotHeight = 480;
constexpr int kLegendWidth = 170;
constexpr int kMargin = 24;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr int kPaletteSize = 10;

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_scatter(const Matrix& embedding, const std::vector<int>& labels,
                           const std::vector<std::string>& class_names,
                           const std::string& title) {
    const Eigen::Index n = embedding.rows();
    if (n > 0 && embedding.cols() != 2) {
        throw std::invalid_argument("render_scatter expects a two-column embedding");
    }
    if (static_cast<std::size_t>(n) != labels.size()) {
        throw std::invalid_argument("render_scatter: label count does not match rows");
    }
    if (class_names.empty()) {
        throw std::invalid_argument("render_scatter: no class names");
    }
    for (int l : labels) {
        if (l < 0 || static_cast<std::size_t>(l) >= class_names.size()) {
            throw std::invalid_argument("render_scatter: label out of range");
        }
    }

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    if (n > 0) {
        x_min = embedding.col(0).minCoeff();
        x_max = embedding.col(0).maxCoeff();
        y_min = embedding.col(1).minCoeff();
        y_max = embedding.col(1).maxCoeff();
    }
    double x_span = x_max - x_min;
    double y_span = y_max - y_min;
    if (x_span <= 0.0) x_span = 1.0;
    if (y_span <= 0.0) y_span = 1.0;
    x_min -= 0.05 * x_span;
    y_min -= 0.05 * y_span;
    x_span *= 1.1;
    y_span *= 1.1;

    const int width = kPlotWidth + kLegendWidth;
    const int height = kPlotHeight;
    const double inner_w = kPlotWidth - 2.0 * kMargin;
    const double inner_h = kPlotHeight - 2.0 * kMargin;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    if (!title.empty()) {
        svg << "  <text x=\"" << kPlotWidth / 2 << "\" y=\"16\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"14\">" << escape_xml(title)
            << "</text>\n";
    }
    svg << "  <rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
        << format_double(inner_w) << "\" height=\"" << format_double(inner_h)
        << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";

    for (Eigen::Index i = 0; i < n; ++i) {
        const double px = kMargin + (embedding(i, 0) - x_min) / x_span * inner_w;
        // SVG y grows downward; flip so larger embedding y is higher.
        const double py = kMargin + (1.0 - (embedding(i, 1) - y_min) / y_span) * inner_h;
        const char* color = kPalette[labels[static_cast<std::size_t>(i)] % kPaletteSize];
        svg << "  <circle cx=\"" << format_double(px) << "\" cy=\"" << format_double(py)
            << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
    }

    svg << "  <g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        const int ly = kMargin + static_cast<int>(c) * 22;
        svg << "    <rect x=\"" << kPlotWidth + 10 << "\" y=\"" << ly
            << "\" width=\"14\" height=\"14\" fill=\"" << kPalette[c % kPaletteSize]
            << "\"/>\n";
        svg << "    <text x=\"" << kPlotWidth + 30 << "\" y=\"" << ly + 11 << "\">"
            << escape_xml(class_names[c]) << "</text>\n";
    }
    svg << "  </g>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace cluskit
