#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "veritas/classify.hpp"
#include "veritas/corpus.hpp"

namespace veritas {

// 2x2 counts indexed (true label, predicted label), row/col 0 = Fake.
struct ConfusionMatrix {
    std::array<std::array<std::size_t, 2>, 2> counts{{{0, 0}, {0, 0}}};

    std::size_t total() const;
    std::size_t correct() const;  // trace
    std::size_t& at(Label truth, Label predicted);
    std::size_t at(Label truth, Label predicted) const;

    bool operator==(const ConfusionMatrix&) const = default;
};

struct EvalReport {
    double accuracy = 0.0;  // percentage
    ConfusionMatrix confusion;
    std::size_t n_test = 0;
    // Extensions beyond the accuracy-only tables; derived from `confusion`.
    double precision_fake = 0.0, recall_fake = 0.0;
    double precision_true = 0.0, recall_true = 0.0;

    bool operator==(const EvalReport&) const = default;
};

ConfusionMatrix confusion_matrix(const std::vector<Label>& predictions,
                                 const std::vector<Label>& truth);

EvalReport report_from_confusion(const ConfusionMatrix& cm);

EvalReport evaluate(const Model& model, const FeatureMatrix& test);

// Labeled 2x2 text grid.
void print_confusion(const ConfusionMatrix& cm, std::ostream& out);

// Half-up rounding to 2 decimals, Table-style percentage formatting.
std::string format_percent(double value);

}  // namespace veritas
