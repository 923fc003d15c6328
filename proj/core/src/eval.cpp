#include "veritas/eval.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "veritas/errors.hpp"

namespace veritas {

namespace {

int label_row(Label l) { return l == Label::Fake ? 0 : 1; }

double pct(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::size_t ConfusionMatrix::total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

std::size_t ConfusionMatrix::correct() const { return counts[0][0] + counts[1][1]; }

std::size_t& ConfusionMatrix::at(Label truth, Label predicted) {
    return counts[static_cast<std::size_t>(label_row(truth))]
                 [static_cast<std::size_t>(label_row(predicted))];
}

std::size_t ConfusionMatrix::at(Label truth, Label predicted) const {
    return counts[static_cast<std::size_t>(label_row(truth))]
                 [static_cast<std::size_t>(label_row(predicted))];
}

ConfusionMatrix confusion_matrix(const std::vector<Label>& predictions,
                                 const std::vector<Label>& truth) {
    if (predictions.size() != truth.size())
        throw DataError("predictions and truth differ in length");
    if (predictions.empty()) throw DataError("cannot build a confusion matrix from no data");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) cm.at(truth[i], predictions[i]) += 1;
    return cm;
}

EvalReport report_from_confusion(const ConfusionMatrix& cm) {
    EvalReport r;
    r.confusion = cm;
    r.n_test = cm.total();
    r.accuracy = pct(cm.correct(), cm.total());
    r.precision_fake = pct(cm.counts[0][0], cm.counts[0][0] + cm.counts[1][0]);
    r.recall_fake = pct(cm.counts[0][0], cm.counts[0][0] + cm.counts[0][1]);
    r.precision_true = pct(cm.counts[1][1], cm.counts[0][1] + cm.counts[1][1]);
    r.recall_true = pct(cm.counts[1][1], cm.counts[1][0] + cm.counts[1][1]);
    return r;
}

EvalReport evaluate(const Model& model, const FeatureMatrix& test) {
    if (test.rows.empty()) throw DataError("empty test set");
    if (model_dimension(model) != test.dimension)
        throw DataError("model/test dimension mismatch");
    std::vector<Label> predictions;
    predictions.reserve(test.rows.size());
    for (const SparseVector& row : test.rows) predictions.push_back(predict(model, row));
    return report_from_confusion(confusion_matrix(predictions, test.labels));
}

void print_confusion(const ConfusionMatrix& cm, std::ostream& out) {
    out << "              pred:fake  pred:true\n";
    out << "  true:fake  " << cm.counts[0][0] << "  " << cm.counts[0][1] << '\n';
    out << "  true:true  " << cm.counts[1][0] << "  " << cm.counts[1][1] << '\n';
}

std::string format_percent(double value) {
    // Half-up at 2 decimals.
    double scaled = std::floor(value * 100.0 + 0.5) / 100.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", scaled);
    return buf;
}

}  // namespace veritas
