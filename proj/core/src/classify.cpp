#include "veritas/classify.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "veritas/errors.hpp"

namespace veritas {

namespace {

void check_two_classes(const FeatureMatrix& data) {
    bool has_fake = false, has_true = false;
    for (Label l : data.labels) (l == Label::Fake ? has_fake : has_true) = true;
    if (!has_fake || !has_true) throw DataError("training data contains a single class");
}

void check_aligned(const FeatureMatrix& data) {
    if (data.rows.size() != data.labels.size())
        throw DataError("feature matrix rows and labels differ in length");
    for (const SparseVector& row : data.rows) {
        if (row.dimension != data.dimension)
            throw DataError("feature matrix row dimension mismatch");
        for (const auto& [index, w] : row.entries) {
            if (!std::isfinite(w)) throw DataError("non-finite feature value");
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Linear SVM, dual coordinate descent on the L1-loss dual:
//   max  sum(alpha) - 1/2 ||w(alpha)||^2,  0 <= alpha_i <= C
// with the bias folded in as a constant all-ones feature. Coordinates are
// visited in fixed sequential order, which makes the run bit-reproducible.
// ---------------------------------------------------------------------------

SvmModel train_linear_svm(const FeatureMatrix& data, const SvmHyperparams& hp) {
    check_aligned(data);
    check_two_classes(data);
    if (hp.C <= 0.0) throw ConfigError("SVM C must be positive");

    const std::size_t n = data.rows.size();
    const std::size_t dim = data.dimension;

    std::vector<double> y(n);
    std::vector<double> q_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<double>(static_cast<int>(data.labels[i]));
        q_diag[i] = squared_norm(data.rows[i]) + 1.0;  // +1 for the bias feature
    }

    std::vector<double> w(dim, 0.0);
    double w_bias = 0.0;
    std::vector<double> alpha(n, 0.0);

    SvmModel model;
    model.hyperparams = hp;

    for (std::size_t pass = 0; pass < hp.max_passes; ++pass) {
        double max_violation = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double decision = w_bias;
            for (const auto& [index, v] : data.rows[i].entries) decision += w[index] * v;
            double gradient = y[i] * decision - 1.0;

            double projected = gradient;
            if (alpha[i] <= 0.0)
                projected = std::min(gradient, 0.0);
            else if (alpha[i] >= hp.C)
                projected = std::max(gradient, 0.0);
            max_violation = std::max(max_violation, std::abs(projected));

            if (projected != 0.0) {
                double updated = std::clamp(alpha[i] - gradient / q_diag[i], 0.0, hp.C);
                double delta = (updated - alpha[i]) * y[i];
                if (delta != 0.0) {
                    alpha[i] = updated;
                    for (const auto& [index, v] : data.rows[i].entries) w[index] += delta * v;
                    w_bias += delta;
                }
            }
        }

        double alpha_sum = 0.0;
        for (double a : alpha) alpha_sum += a;
        double norm2 = w_bias * w_bias;
        for (double v : w) norm2 += v * v;
        model.dual_objective_log.push_back(alpha_sum - 0.5 * norm2);

        if (max_violation < hp.tolerance) break;
    }

    model.weights = std::move(w);
    model.bias = w_bias;
    return model;
}

Label predict_svm(const SvmModel& model, const SparseVector& x) {
    if (x.dimension != model.weights.size()) throw DataError("SVM dimension mismatch");
    double decision = model.bias;
    for (const auto& [index, v] : x.entries) decision += model.weights[index] * v;
    return decision < 0.0 ? Label::Fake : Label::True;
}

// ---------------------------------------------------------------------------
// KNN
// ---------------------------------------------------------------------------

KnnModel train_knn(const FeatureMatrix& data, std::size_t k) {
    check_aligned(data);
    if (k == 0) throw ConfigError("KNN k must be at least 1");
    if (data.rows.size() < k)
        throw DataError("KNN needs at least k=" + std::to_string(k) + " training rows");
    KnnModel model;
    model.rows = data.rows;
    model.labels = data.labels;
    model.dimension = data.dimension;
    model.k = k;
    return model;
}

namespace {

// Summed in ascending index order so sparse and dense scans agree bitwise.
double squared_distance(const SparseVector& a, const SparseVector& b) {
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        if (j >= b.entries.size() ||
            (i < a.entries.size() && a.entries[i].first < b.entries[j].first)) {
            sum += a.entries[i].second * a.entries[i].second;
            ++i;
        } else if (i >= a.entries.size() || b.entries[j].first < a.entries[i].first) {
            sum += b.entries[j].second * b.entries[j].second;
            ++j;
        } else {
            double d = a.entries[i].second - b.entries[j].second;
            sum += d * d;
            ++i;
            ++j;
        }
    }
    return sum;
}

}  // namespace

Label predict_knn(const KnnModel& model, const SparseVector& x) {
    if (x.dimension != model.dimension) throw DataError("KNN dimension mismatch");
    // (distance, training index); index order breaks distance ties.
    std::vector<std::pair<double, std::size_t>> best;
    best.reserve(model.k + 1);
    for (std::size_t i = 0; i < model.rows.size(); ++i) {
        double d = squared_distance(model.rows[i], x);
        best.emplace_back(d, i);
        std::push_heap(best.begin(), best.end());
        if (best.size() > model.k) {
            std::pop_heap(best.begin(), best.end());
            best.pop_back();
        }
    }
    int vote = 0;
    for (const auto& [d, i] : best) vote += static_cast<int>(model.labels[i]);
    return vote < 0 ? Label::Fake : Label::True;
}

// ---------------------------------------------------------------------------
// Decision tree, best-first CART growth on Gini impurity.
// Routing rule: x[feature] <= threshold goes left.
// ---------------------------------------------------------------------------

namespace {

struct SplitChoice {
    bool found = false;
    std::uint32_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;  // count-weighted impurity decrease
};

double gini_weighted(std::size_t n_fake, std::size_t n_true) {
    std::size_t n = n_fake + n_true;
    if (n == 0) return 0.0;
    double pf = static_cast<double>(n_fake) / static_cast<double>(n);
    double pt = static_cast<double>(n_true) / static_cast<double>(n);
    return static_cast<double>(n) * (1.0 - pf * pf - pt * pt);
}

struct Posting {
    std::uint32_t row;
    double value;
};

// Best split over one feature for the rows flagged in `in_node`, given the
// feature's nonzero postings. Rows absent from the postings hold value 0.
void best_split_for_feature(std::uint32_t feature, const std::vector<Posting>& postings,
                            const std::vector<char>& in_node,
                            const std::vector<Label>& labels, std::size_t node_fake,
                            std::size_t node_true, SplitChoice& best) {
    std::vector<std::pair<double, bool>> vals;  // (value, is_fake), nonzero rows only
    std::size_t nz_fake = 0, nz_true = 0;
    for (const Posting& p : postings) {
        if (!in_node[p.row]) continue;
        bool is_fake = labels[p.row] == Label::Fake;
        vals.emplace_back(p.value, is_fake);
        (is_fake ? nz_fake : nz_true) += 1;
    }
    if (vals.empty()) return;  // constant zero over the node
    std::size_t zero_fake = node_fake - nz_fake;
    std::size_t zero_true = node_true - nz_true;
    std::sort(vals.begin(), vals.end());

    // Merge the implicit zero block into the sorted sequence as
    // (value, fake count, true count) groups over distinct values.
    std::vector<std::tuple<double, std::size_t, std::size_t>> groups;
    bool zero_placed = (zero_fake + zero_true == 0);
    auto place_zero = [&] {
        groups.emplace_back(0.0, zero_fake, zero_true);
        zero_placed = true;
    };
    std::size_t i = 0;
    while (i < vals.size()) {
        double v = vals[i].first;
        if (!zero_placed && v > 0.0) place_zero();
        std::size_t gf = 0, gt = 0;
        while (i < vals.size() && vals[i].first == v) {
            (vals[i].second ? gf : gt) += 1;
            ++i;
        }
        if (v == 0.0) {
            gf += zero_fake;
            gt += zero_true;
            zero_placed = true;
        }
        groups.emplace_back(v, gf, gt);
    }
    if (!zero_placed) place_zero();
    if (groups.size() < 2) return;

    const double parent = gini_weighted(node_fake, node_true);
    std::size_t left_fake = 0, left_true = 0;
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        left_fake += std::get<1>(groups[g]);
        left_true += std::get<2>(groups[g]);
        double threshold = 0.5 * (std::get<0>(groups[g]) + std::get<0>(groups[g + 1]));
        double gain = parent - gini_weighted(left_fake, left_true) -
                      gini_weighted(node_fake - left_fake, node_true - left_true);
        // Features and thresholds are scanned in ascending order, so a
        // strictly-greater gain requirement realizes the
        // (lower feature, lower threshold) tie-break.
        if (gain > 0.0 && (!best.found || gain > best.gain)) {
            best.found = true;
            best.feature = feature;
            best.threshold = threshold;
            best.gain = gain;
        }
    }
}

struct PendingLeaf {
    std::int32_t node = -1;
    std::size_t depth = 0;
    std::vector<std::uint32_t> rows;
    std::size_t n_fake = 0, n_true = 0;
    SplitChoice split;
};

}  // namespace

std::size_t TreeModel::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf; }));
}

TreeModel train_decision_tree(const FeatureMatrix& data, const TreeConfig& cfg) {
    check_aligned(data);
    check_two_classes(data);
    if (cfg.max_leaves && cfg.max_depth)
        throw ConfigError("max_leaves and max_depth are mutually exclusive");
    if (cfg.max_leaves && *cfg.max_leaves == 0)
        throw ConfigError("max_leaves must be at least 1");
    const std::size_t max_leaves =
        cfg.max_depth ? std::numeric_limits<std::size_t>::max() : cfg.max_leaves.value_or(3);
    const std::size_t max_depth =
        cfg.max_depth ? *cfg.max_depth : std::numeric_limits<std::size_t>::max();

    const std::size_t n = data.rows.size();

    // Column postings; row order within a feature is ascending by construction.
    std::vector<std::vector<Posting>> columns(data.dimension);
    for (std::uint32_t r = 0; r < n; ++r)
        for (const auto& [index, v] : data.rows[r].entries)
            columns[index].push_back(Posting{r, v});

    TreeModel model;
    model.dimension = data.dimension;
    model.config = cfg;

    auto make_leaf = [&](const std::vector<std::uint32_t>& rows) {
        TreeNode node;
        node.is_leaf = true;
        for (std::uint32_t r : rows)
            (data.labels[r] == Label::Fake ? node.count_fake : node.count_true) += 1;
        // Majority class, tie -> True.
        node.prediction = node.count_fake > node.count_true ? Label::Fake : Label::True;
        return node;
    };

    auto find_split = [&](const PendingLeaf& leaf) {
        SplitChoice best;
        std::vector<char> in_node(n, 0);
        for (std::uint32_t r : leaf.rows) in_node[r] = 1;
        for (std::uint32_t f = 0; f < data.dimension; ++f)
            best_split_for_feature(f, columns[f], in_node, data.labels, leaf.n_fake,
                                   leaf.n_true, best);
        return best;
    };

    std::vector<std::uint32_t> all_rows(n);
    for (std::uint32_t r = 0; r < n; ++r) all_rows[r] = r;

    PendingLeaf root;
    root.node = 0;
    root.depth = 0;
    root.rows = std::move(all_rows);
    for (Label l : data.labels) (l == Label::Fake ? root.n_fake : root.n_true) += 1;
    model.nodes.push_back(make_leaf(root.rows));
    root.split = find_split(root);

    std::vector<PendingLeaf> frontier;
    frontier.push_back(std::move(root));
    std::size_t leaves = 1;

    while (leaves < max_leaves) {
        // Expand the frontier leaf with the largest gain; ties go to the
        // earlier-created node.
        std::size_t pick = frontier.size();
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            if (!frontier[i].split.found || frontier[i].depth >= max_depth) continue;
            if (pick == frontier.size() || frontier[i].split.gain > frontier[pick].split.gain ||
                (frontier[i].split.gain == frontier[pick].split.gain &&
                 frontier[i].node < frontier[pick].node))
                pick = i;
        }
        if (pick == frontier.size()) break;

        PendingLeaf leaf = std::move(frontier[pick]);
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));

        PendingLeaf left, right;
        left.depth = right.depth = leaf.depth + 1;
        for (std::uint32_t r : leaf.rows) {
            double v = 0.0;
            const auto& entries = data.rows[r].entries;
            auto it = std::lower_bound(
                entries.begin(), entries.end(), leaf.split.feature,
                [](const auto& e, std::uint32_t f) { return e.first < f; });
            if (it != entries.end() && it->first == leaf.split.feature) v = it->second;
            PendingLeaf& side = v <= leaf.split.threshold ? left : right;
            side.rows.push_back(r);
            (data.labels[r] == Label::Fake ? side.n_fake : side.n_true) += 1;
        }

        TreeNode& parent = model.nodes[static_cast<std::size_t>(leaf.node)];
        parent.is_leaf = false;
        parent.feature = leaf.split.feature;
        parent.threshold = leaf.split.threshold;
        left.node = static_cast<std::int32_t>(model.nodes.size());
        model.nodes.push_back(make_leaf(left.rows));
        right.node = static_cast<std::int32_t>(model.nodes.size());
        model.nodes.push_back(make_leaf(right.rows));
        model.nodes[static_cast<std::size_t>(leaf.node)].left = left.node;
        model.nodes[static_cast<std::size_t>(leaf.node)].right = right.node;
        ++leaves;

        left.split = find_split(left);
        right.split = find_split(right);
        frontier.push_back(std::move(left));
        frontier.push_back(std::move(right));
    }
    return model;
}

Label predict_tree(const TreeModel& model, const SparseVector& x) {
    if (x.dimension != model.dimension) throw DataError("tree dimension mismatch");
    const TreeNode* node = &model.nodes[0];
    while (!node->is_leaf) {
        double v = 0.0;
        auto it = std::lower_bound(
            x.entries.begin(), x.entries.end(), node->feature,
            [](const auto& e, std::uint32_t f) { return e.first < f; });
        if (it != x.entries.end() && it->first == node->feature) v = it->second;
        node = &model.nodes[static_cast<std::size_t>(v <= node->threshold ? node->left
                                                                          : node->right)];
    }
    return node->prediction;
}

// ---------------------------------------------------------------------------
// Dispatch and persistence
// ---------------------------------------------------------------------------

Label predict(const Model& model, const SparseVector& x) {
    return std::visit(
        [&](const auto& m) -> Label {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SvmModel>) return predict_svm(m, x);
            else if constexpr (std::is_same_v<T, KnnModel>) return predict_knn(m, x);
            else return predict_tree(m, x);
        },
        model);
}

std::uint32_t model_dimension(const Model& model) {
    return std::visit(
        [](const auto& m) -> std::uint32_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SvmModel>)
                return static_cast<std::uint32_t>(m.weights.size());
            else return m.dimension;
        },
        model);
}

namespace {

void write_double(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    out << buf;
}

double read_double(std::istream& in) {
    std::string tok;
    if (!(in >> tok)) throw DataError("truncated model file");
    return std::strtod(tok.c_str(), nullptr);
}

void write_sparse(std::ostream& out, const SparseVector& v) {
    out << v.entries.size();
    for (const auto& [index, w] : v.entries) {
        out << ' ' << index << ' ';
        write_double(out, w);
    }
    out << '\n';
}

SparseVector read_sparse(std::istream& in, std::uint32_t dimension) {
    std::size_t nnz;
    if (!(in >> nnz)) throw DataError("truncated model file");
    SparseVector v;
    v.dimension = dimension;
    v.entries.reserve(nnz);
    for (std::size_t i = 0; i < nnz; ++i) {
        std::uint32_t index;
        if (!(in >> index)) throw DataError("truncated model file");
        v.entries.emplace_back(index, read_double(in));
    }
    return v;
}

}  // namespace

void save_model(const Model& model, std::ostream& out) {
    if (const auto* svm = std::get_if<SvmModel>(&model)) {
        out << "veritas-model v1 svm " << svm->weights.size() << '\n';
        write_double(out, svm->bias);
        out << '\n' << svm->weights.size();
        for (double w : svm->weights) {
            out << ' ';
            write_double(out, w);
        }
        out << '\n';
    } else if (const auto* knn = std::get_if<KnnModel>(&model)) {
        out << "veritas-model v1 knn " << knn->dimension << '\n';
        out << knn->k << ' ' << knn->rows.size() << '\n';
        for (std::size_t i = 0; i < knn->rows.size(); ++i) {
            out << static_cast<int>(knn->labels[i]) << ' ';
            write_sparse(out, knn->rows[i]);
        }
    } else {
        const auto& tree = std::get<TreeModel>(model);
        out << "veritas-model v1 dt " << tree.dimension << '\n';
        out << tree.nodes.size() << '\n';
        for (const TreeNode& n : tree.nodes) {
            if (n.is_leaf) {
                out << "leaf " << static_cast<int>(n.prediction) << ' ' << n.count_fake << ' '
                    << n.count_true << '\n';
            } else {
                out << "split " << n.feature << ' ';
                write_double(out, n.threshold);
                out << ' ' << n.left << ' ' << n.right << '\n';
            }
        }
    }
}

Model load_model(std::istream& in) {
    std::string magic, version, kind;
    std::uint32_t dimension;
    if (!(in >> magic >> version >> kind >> dimension) || magic != "veritas-model" ||
        version != "v1")
        throw DataError("not a veritas-model v1 file");
    if (kind == "svm") {
        SvmModel svm;
        svm.bias = read_double(in);
        std::size_t count;
        if (!(in >> count) || count != dimension) throw DataError("bad SVM weight count");
        svm.weights.reserve(count);
        for (std::size_t i = 0; i < count; ++i) svm.weights.push_back(read_double(in));
        return svm;
    }
    if (kind == "knn") {
        KnnModel knn;
        knn.dimension = dimension;
        std::size_t n;
        if (!(in >> knn.k >> n)) throw DataError("truncated model file");
        for (std::size_t i = 0; i < n; ++i) {
            int label;
            if (!(in >> label)) throw DataError("truncated model file");
            knn.labels.push_back(label < 0 ? Label::Fake : Label::True);
            knn.rows.push_back(read_sparse(in, dimension));
        }
        return knn;
    }
    if (kind == "dt") {
        TreeModel tree;
        tree.dimension = dimension;
        std::size_t count;
        if (!(in >> count)) throw DataError("truncated model file");
        for (std::size_t i = 0; i < count; ++i) {
            std::string tag;
            if (!(in >> tag)) throw DataError("truncated model file");
            TreeNode node;
            if (tag == "leaf") {
                int label;
                if (!(in >> label >> node.count_fake >> node.count_true))
                    throw DataError("truncated model file");
                node.prediction = label < 0 ? Label::Fake : Label::True;
            } else if (tag == "split") {
                node.is_leaf = false;
                if (!(in >> node.feature)) throw DataError("truncated model file");
                node.threshold = read_double(in);
                if (!(in >> node.left >> node.right)) throw DataError("truncated model file");
            } else {
                throw DataError("unknown tree node tag '" + tag + "'");
            }
            tree.nodes.push_back(node);
        }
        return tree;
    }
    throw DataError("unknown model kind '" + kind + "'");
}

}  // namespace veritas
