#pragma once

#include "cluskit/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cluskit {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Joint count table between two labelings: rows index the first labeling.
struct ContingencyTable {
    CountMatrix counts;
    std::vector<std::int64_t> row_sums;
    std::vector<std::int64_t> col_sums;
    std::int64_t total = 0;
};

/// Builds the contingency table of two equal-length labelings with
/// non-negative labels. Shape is (max(a)+1) x (max(b)+1).
ContingencyTable contingency(const std::vector<int>& a, const std::vector<int>& b);

/// Shannon entropy of a marginal count vector, in nats.
double marginal_entropy(const std::vector<std::int64_t>& counts, std::int64_t total);

double entropy_rows(const ContingencyTable& t);
double entropy_cols(const ContingencyTable& t);

/// Mutual information of the table, in nats. Empty cells contribute zero.
double mutual_information(const ContingencyTable& t);

/// Expected mutual information under the fixed-marginal permutation model.
double expected_mi(const ContingencyTable& t);

/// Adjusted mutual information: (MI - EMI) / (mean(Ha, Hb) - EMI).
/// Returns 0 when the denominator magnitude is below 1e-12. Not clamped,
/// so values slightly below zero are possible.
double ami(const std::vector<int>& a, const std::vector<int>& b);

/// Per-cluster majority class: mapping[c] is the most frequent true class in
/// cluster c, ties resolved to the smaller class index.
std::vector<int> majority_map(const std::vector<int>& pred, const std::vector<int>& truth);

/// Square confusion matrix with rows indexed by true class and columns by
/// the majority-mapped predicted class.
struct ConfusionMatrix {
    std::vector<std::string> classes;
    CountMatrix counts;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& pred, const std::vector<int>& truth,
                                 const std::vector<int>& mapping,
                                 const std::vector<std::string>& class_names);

/// Which axis of the confusion matrix carries the ground truth.
enum class TruthConvention { row_truth, column_truth };

/// Per-class rates; a rate with a zero denominator is left unset.
struct SensSpec {
    std::optional<double> sensitivity;
    std::optional<double> specificity;
};

SensSpec sensitivity_specificity(const ConfusionMatrix& cm, int class_index,
                                 TruthConvention convention);

/// Arithmetic mean. Throws std::invalid_argument on an empty input.
double macro_average(const std::vector<double>& values);

}  // namespace cluskit
