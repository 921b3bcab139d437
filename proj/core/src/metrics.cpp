#include "cluskit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cluskit {

namespace {

// Shared term shape for entropy and mutual information. Writing the entropy
// as sum (c/N) * log(N*c / c*c) makes H(a) float-identical to MI(a, a), so
// AMI of a labeling against itself is exactly 1.0.
double plogp_term(std::int64_t joint, std::int64_t row, std::int64_t col, std::int64_t total) {
    const double n = static_cast<double>(total);
    const double num = n * static_cast<double>(joint);
    const double den = static_cast<double>(row) * static_cast<double>(col);
    return (static_cast<double>(joint) / n) * std::log(num / den);
}

}  // namespace

ContingencyTable contingency(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("labelings differ in length");
    }
    if (a.empty()) {
        throw std::invalid_argument("labelings are empty");
    }
    int max_a = 0;
    int max_b = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0 || b[i] < 0) {
            throw std::invalid_argument("negative label at sample " + std::to_string(i));
        }
        max_a = std::max(max_a, a[i]);
        max_b = std::max(max_b, b[i]);
    }

    ContingencyTable t;
    t.counts = CountMatrix::Zero(max_a + 1, max_b + 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++t.counts(a[i], b[i]);
    }
    t.row_sums.assign(static_cast<std::size_t>(max_a) + 1, 0);
    t.col_sums.assign(static_cast<std::size_t>(max_b) + 1, 0);
    for (Eigen::Index r = 0; r < t.counts.rows(); ++r) {
        for (Eigen::Index c = 0; c < t.counts.cols(); ++c) {
            t.row_sums[static_cast<std::size_t>(r)] += t.counts(r, c);
            t.col_sums[static_cast<std::size_t>(c)] += t.counts(r, c);
        }
    }
    t.total = static_cast<std::int64_t>(a.size());
    return t;
}

double marginal_entropy(const std::vector<std::int64_t>& counts, std::int64_t total) {
    if (total <= 0) {
        throw std::invalid_argument("marginal entropy needs a positive total");
    }
    double h = 0.0;
    for (std::int64_t c : counts) {
        if (c < 0) {
            throw std::invalid_argument("negative marginal count");
        }
        if (c > 0) {
            h += plogp_term(c, c, c, total);
        }
    }
    return h;
}

double entropy_rows(const ContingencyTable& t) { return marginal_entropy(t.row_sums, t.total); }

double entropy_cols(const ContingencyTable& t) { return marginal_entropy(t.col_sums, t.total); }

double mutual_information(const ContingencyTable& t) {
    double mi = 0.0;
    for (Eigen::Index r = 0; r < t.counts.rows(); ++r) {
        for (Eigen::Index c = 0; c < t.counts.cols(); ++c) {
            const std::int64_t n_rc = t.counts(r, c);
            if (n_rc > 0) {
                mi += plogp_term(n_rc, t.row_sums[static_cast<std::size_t>(r)],
                                 t.col_sums[static_cast<std::size_t>(c)], t.total);
            }
        }
    }
    return mi;
}

double expected_mi(const ContingencyTable& t) {
    const std::int64_t n = t.total;
    std::vector<double> lfact(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t k = 2; k < lfact.size(); ++k) {
        lfact[k] = lfact[k - 1] + std::log(static_cast<double>(k));
    }

    double emi = 0.0;
    for (std::int64_t a : t.row_sums) {
        for (std::int64_t b : t.col_sums) {
            if (a == 0 || b == 0) {
                continue;
            }
            const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
            const std::int64_t hi = std::min(a, b);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const double term = plogp_term(nij, a, b, n);
                const double log_prob =
                    lfact[static_cast<std::size_t>(a)] + lfact[static_cast<std::size_t>(b)] +
                    lfact[static_cast<std::size_t>(n - a)] + lfact[static_cast<std::size_t>(n - b)] -
                    lfact[static_cast<std::size_t>(n)] - lfact[static_cast<std::size_t>(nij)] -
                    lfact[static_cast<std::size_t>(a - nij)] -
                    lfact[static_cast<std::size_t>(b - nij)] -
                    lfact[static_cast<std::size_t>(n - a - b + nij)];
                emi += term * std::exp(log_prob);
            }
        }
    }
    return emi;
}

double ami(const std::vector<int>& a, const std::vector<int>& b) {
    const ContingencyTable t = contingency(a, b);
    const double mi = mutual_information(t);
    const double emi = expected_mi(t);
    const double h_mean = 0.5 * (entropy_rows(t) + entropy_cols(t));
    const double denom = h_mean - emi;
    if (std::abs(denom) < 1e-12) {
        return 0.0;
    }
    return (mi - emi) / denom;
}

std::vector<int> majority_map(const std::vector<int>& pred, const std::vector<int>& truth) {
    const ContingencyTable t = contingency(pred, truth);
    std::vector<int> mapping(static_cast<std::size_t>(t.counts.rows()), 0);
    for (Eigen::Index cluster = 0; cluster < t.counts.rows(); ++cluster) {
        std::int64_t best = -1;
        int best_class = 0;
        for (Eigen::Index cls = 0; cls < t.counts.cols(); ++cls) {
            if (t.counts(cluster, cls) > best) {
                best = t.counts(cluster, cls);
                best_class = static_cast<int>(cls);
            }
        }
        mapping[static_cast<std::size_t>(cluster)] = best_class;
    }
    return mapping;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& pred, const std::vector<int>& truth,
                                 const std::vector<int>& mapping,
                                 const std::vector<std::string>& class_names) {
    if (pred.size() != truth.size()) {
        throw std::invalid_argument("labelings differ in length");
    }
    if (pred.empty()) {
        throw std::invalid_argument("labelings are empty");
    }
    if (class_names.empty()) {
        throw std::invalid_argument("no class names given");
    }
    const int n_classes = static_cast<int>(class_names.size());
    for (int cls : mapping) {
        if (cls < 0 || cls >= n_classes) {
            throw std::invalid_argument("mapping targets class out of range");
        }
    }

    ConfusionMatrix cm;
    cm.classes = class_names;
    cm.counts = CountMatrix::Zero(n_classes, n_classes);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] < 0 || static_cast<std::size_t>(pred[i]) >= mapping.size()) {
            throw std::invalid_argument("unmapped cluster label " + std::to_string(pred[i]));
        }
        if (truth[i] < 0 || truth[i] >= n_classes) {
            throw std::invalid_argument("true label out of range at sample " + std::to_string(i));
        }
        ++cm.counts(truth[i], mapping[static_cast<std::size_t>(pred[i])]);
    }
    return cm;
}

SensSpec sensitivity_specificity(const ConfusionMatrix& cm, int class_index,
                                 TruthConvention convention) {
    if (class_index < 0 || class_index >= cm.counts.rows()) {
        throw std::invalid_argument("class index out of range");
    }
    CountMatrix m = cm.counts;
    if (convention == TruthConvention::column_truth) {
        m = cm.counts.transpose().eval();
    }
    const std::int64_t total = m.sum();
    const std::int64_t tp = m(class_index, class_index);
    const std::int64_t fn = m.row(class_index).sum() - tp;
    const std::int64_t fp = m.col(class_index).sum() - tp;
    const std::int64_t tn = total - tp - fn - fp;

    SensSpec out;
    if (tp + fn > 0) {
        out.sensitivity = static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    if (tn + fp > 0) {
        out.specificity = static_cast<double>(tn) / static_cast<double>(tn + fp);
    }
    return out;
}

double macro_average(const std::vector<double>& values) {
    if (values.empty()) {
        throw std::invalid_argument("macro average of an empty list");
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

}  // namespace cluskit
