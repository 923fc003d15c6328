#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "veritas/corpus.hpp"
#include "veritas/vectorize.hpp"

namespace veritas {

struct FeatureMatrix {
    std::vector<SparseVector> rows;
    std::vector<Label> labels;  // aligned with rows; Fake -> -1, True -> +1
    std::uint32_t dimension = 0;

    std::size_t size() const { return rows.size(); }
};

struct SvmHyperparams {
    double C = 1.0;
    double tolerance = 1e-4;
    std::size_t max_passes = 1000;
    std::uint64_t seed = 0;
};

struct SvmModel {
    std::vector<double> weights;  // dense, length V
    double bias = 0.0;
    SvmHyperparams hyperparams;
    // Dual objective value after each full coordinate pass; non-decreasing.
    std::vector<double> dual_objective_log;
};

struct KnnModel {
    std::vector<SparseVector> rows;
    std::vector<Label> labels;
    std::uint32_t dimension = 0;
    std::size_t k = 3;
};

struct TreeNode {
    bool is_leaf = true;
    // split node
    std::uint32_t feature = 0;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    // leaf node
    Label prediction = Label::True;
    std::size_t count_fake = 0;
    std::size_t count_true = 0;
};

struct TreeConfig {
    // Exactly one growth limit may be set; both unset -> max_leaves = 3.
    std::optional<std::size_t> max_leaves;
    std::optional<std::size_t> max_depth;
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::uint32_t dimension = 0;
    TreeConfig config;

    std::size_t leaf_count() const;
};

// L2-regularized L1-loss SVM trained by deterministic dual coordinate
// descent; the bias is handled as an implicit all-ones feature. Throws
// DataError on single-class data or non-finite features.
SvmModel train_linear_svm(const FeatureMatrix& data, const SvmHyperparams& hp = {});

// sign(w.x + b); exact zero predicts True.
Label predict_svm(const SvmModel& model, const SparseVector& x);

KnnModel train_knn(const FeatureMatrix& data, std::size_t k = 3);

// Majority vote of the k nearest rows under squared Euclidean distance;
// distance ties go to the lower training-row index.
Label predict_knn(const KnnModel& model, const SparseVector& x);

// CART-style best-first growth by largest Gini impurity decrease.
// Candidate thresholds are midpoints between consecutive distinct sorted
// feature values; equal-gain ties break by (lower feature, lower threshold).
// Leaves predict their majority class, ties -> True.
TreeModel train_decision_tree(const FeatureMatrix& data, const TreeConfig& cfg = {});

Label predict_tree(const TreeModel& model, const SparseVector& x);

using Model = std::variant<SvmModel, KnnModel, TreeModel>;

Label predict(const Model& model, const SparseVector& x);
std::uint32_t model_dimension(const Model& model);

// Text serialization, header `veritas-model v1 <kind> <V>`; doubles are
// written as hexfloats so a round trip reproduces identical predictions.
void save_model(const Model& model, std::ostream& out);
Model load_model(std::istream& in);

}  // namespace veritas
