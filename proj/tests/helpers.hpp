#pragma once

// Test-only utilities: small builders plus the independent brute-force
// oracles the implementation is checked against. Nothing here may call into
// the code paths under test except through the public surface being compared.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "veritas/classify.hpp"
#include "veritas/corpus.hpp"
#include "veritas/vectorize.hpp"

namespace vt = veritas;

inline const std::filesystem::path kDataDir = VERITAS_DATA_DIR;

inline vt::SparseVector sparse(std::uint32_t dim,
                               std::vector<std::pair<std::uint32_t, double>> entries) {
    vt::SparseVector v;
    v.dimension = dim;
    v.entries = std::move(entries);
    return v;
}

inline std::vector<double> densify(const vt::SparseVector& v) {
    std::vector<double> out(v.dimension, 0.0);
    for (const auto& [i, w] : v.entries) out[i] = w;
    return out;
}

// Scratch corpus directory, removed on destruction.
struct TempCorpusDir {
    std::filesystem::path root;

    explicit TempCorpusDir(const std::string& name) {
        root = std::filesystem::temp_directory_path() / ("veritas_test_" + name);
        std::filesystem::remove_all(root);
        std::filesystem::create_directories(root);
    }
    ~TempCorpusDir() { std::filesystem::remove_all(root); }

    void write(const std::string& rel, const std::string& content) const {
        std::filesystem::path p = root / rel;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p) << content;
    }
};

// ---------------------------------------------------------------------------
// Dense TF-IDF oracle. Recomputes vocabulary selection, idf, tf and L2
// normalization from scratch with dense arithmetic.
// ---------------------------------------------------------------------------

struct DenseTfidfOracle {
    std::vector<std::string> terms;  // lexicographic
    std::vector<double> idf;

    DenseTfidfOracle(const std::vector<std::vector<std::string>>& train_docs,
                     std::optional<std::size_t> cap, vt::IdfVariant variant) {
        std::map<std::string, std::uint64_t> total_count;
        std::map<std::string, std::uint32_t> df;
        for (const auto& doc : train_docs) {
            std::set<std::string> seen;
            for (const auto& t : doc) {
                total_count[t] += 1;
                seen.insert(t);
            }
            for (const auto& t : seen) df[t] += 1;
        }
        std::vector<std::string> all;
        for (const auto& [t, c] : total_count) all.push_back(t);
        if (cap && all.size() > *cap) {
            std::sort(all.begin(), all.end(), [&](const std::string& a, const std::string& b) {
                if (total_count[a] != total_count[b]) return total_count[a] > total_count[b];
                return a < b;
            });
            all.resize(*cap);
            std::sort(all.begin(), all.end());
        }
        terms = all;
        double total_docs = static_cast<double>(train_docs.size());
        for (const auto& t : terms) {
            double n = static_cast<double>(df[t]);
            idf.push_back(variant == vt::IdfVariant::Plain
                              ? std::log(total_docs / n)
                              : std::log((1.0 + total_docs) / (1.0 + n)) + 1.0);
        }
    }

    std::vector<double> vectorize(const std::vector<std::string>& doc) const {
        std::vector<double> counts(terms.size(), 0.0);
        double in_vocab = 0.0;
        for (const auto& tok : doc) {
            auto it = std::lower_bound(terms.begin(), terms.end(), tok);
            if (it != terms.end() && *it == tok) {
                counts[static_cast<std::size_t>(it - terms.begin())] += 1.0;
                in_vocab += 1.0;
            }
        }
        std::vector<double> weights(terms.size(), 0.0);
        if (in_vocab > 0.0)
            for (std::size_t i = 0; i < terms.size(); ++i)
                weights[i] = counts[i] / in_vocab * idf[i];
        double norm = 0.0;
        for (double w : weights) norm += w * w;
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (double& w : weights) w /= norm;
        }
        return weights;
    }
};

// ---------------------------------------------------------------------------
// Brute-force KNN oracle: dense squared distances summed in ascending index
// order, candidates ranked by (distance, training index).
// ---------------------------------------------------------------------------

inline vt::Label knn_oracle(const std::vector<vt::SparseVector>& train,
                            const std::vector<vt::Label>& labels, const vt::SparseVector& query,
                            std::size_t k) {
    std::vector<double> q = densify(query);
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < train.size(); ++i) {
        std::vector<double> r = densify(train[i]);
        double d = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (r[j] == 0.0 && q[j] == 0.0) continue;  // same skip as the sparse merge
            double diff = r[j] - q[j];
            d += diff * diff;
        }
        ranked.emplace_back(d, i);
    }
    std::sort(ranked.begin(), ranked.end());
    int vote = 0;
    for (std::size_t i = 0; i < k; ++i) vote += static_cast<int>(labels[ranked[i].second]);
    return vote < 0 ? vt::Label::Fake : vt::Label::True;
}

// ---------------------------------------------------------------------------
// Exhaustive best-first decision-tree oracle over dense data.
// ---------------------------------------------------------------------------

struct OracleTree {
    struct Node {
        bool is_leaf = true;
        std::uint32_t feature = 0;
        double threshold = 0.0;
        int left = -1, right = -1;
        vt::Label prediction = vt::Label::True;
        std::size_t count_fake = 0, count_true = 0;
    };
    std::vector<Node> nodes;
};

inline OracleTree tree_oracle(const std::vector<std::vector<double>>& x,
                              const std::vector<vt::Label>& y, std::size_t max_leaves) {
    auto gini_w = [](std::size_t nf, std::size_t nt) {
        std::size_t n = nf + nt;
        if (n == 0) return 0.0;
        double pf = double(nf) / double(n), pt = double(nt) / double(n);
        return double(n) * (1.0 - pf * pf - pt * pt);
    };

    struct Best {
        bool found = false;
        std::uint32_t feature = 0;
        double threshold = 0.0;
        double gain = 0.0;
    };
    auto best_split = [&](const std::vector<std::size_t>& rows) {
        Best best;
        std::size_t nf = 0, nt = 0;
        for (std::size_t r : rows) (y[r] == vt::Label::Fake ? nf : nt) += 1;
        double parent = gini_w(nf, nt);
        std::size_t n_features = x[0].size();
        for (std::uint32_t f = 0; f < n_features; ++f) {
            std::vector<std::pair<double, vt::Label>> vals;
            for (std::size_t r : rows) vals.emplace_back(x[r][f], y[r]);
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            std::size_t lf = 0, lt = 0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                (vals[i].second == vt::Label::Fake ? lf : lt) += 1;
                if (vals[i].first == vals[i + 1].first) continue;
                double threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                double gain = parent - gini_w(lf, lt) - gini_w(nf - lf, nt - lt);
                if (gain > 0.0 && (!best.found || gain > best.gain)) {
                    best = Best{true, f, threshold, gain};
                }
            }
        }
        return best;
    };

    auto make_leaf = [&](const std::vector<std::size_t>& rows) {
        OracleTree::Node node;
        for (std::size_t r : rows)
            (y[r] == vt::Label::Fake ? node.count_fake : node.count_true) += 1;
        node.prediction =
            node.count_fake > node.count_true ? vt::Label::Fake : vt::Label::True;
        return node;
    };

    OracleTree tree;
    struct Pending {
        int node;
        std::vector<std::size_t> rows;
        Best split;
    };
    std::vector<std::size_t> all(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) all[i] = i;
    tree.nodes.push_back(make_leaf(all));
    std::vector<Pending> frontier{{0, all, best_split(all)}};
    std::size_t leaves = 1;

    while (leaves < max_leaves) {
        std::size_t pick = frontier.size();
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            if (!frontier[i].split.found) continue;
            if (pick == frontier.size() || frontier[i].split.gain > frontier[pick].split.gain ||
                (frontier[i].split.gain == frontier[pick].split.gain &&
                 frontier[i].node < frontier[pick].node))
                pick = i;
        }
        if (pick == frontier.size()) break;
        Pending leaf = frontier[pick];
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));

        std::vector<std::size_t> lrows, rrows;
        for (std::size_t r : leaf.rows)
            (x[r][leaf.split.feature] <= leaf.split.threshold ? lrows : rrows).push_back(r);
        tree.nodes[static_cast<std::size_t>(leaf.node)].is_leaf = false;
        tree.nodes[static_cast<std::size_t>(leaf.node)].feature = leaf.split.feature;
        tree.nodes[static_cast<std::size_t>(leaf.node)].threshold = leaf.split.threshold;
        int li = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(make_leaf(lrows));
        int ri = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(make_leaf(rrows));
        tree.nodes[static_cast<std::size_t>(leaf.node)].left = li;
        tree.nodes[static_cast<std::size_t>(leaf.node)].right = ri;
        ++leaves;
        frontier.push_back({li, lrows, best_split(lrows)});
        frontier.push_back({ri, rrows, best_split(rrows)});
    }
    return tree;
}

// ---------------------------------------------------------------------------
// Generic QP oracle for the SVM dual: maximize e.a - 1/2 a'Qa over the box
// [0, C]^n by projected gradient with a fixed 1/L step. Returns primal
// weights (and bias) recovered from the optimal alphas.
// ---------------------------------------------------------------------------

struct QpSolution {
    std::vector<double> weights;
    double bias = 0.0;
    double dual_objective = 0.0;
};

inline QpSolution svm_qp_oracle(const std::vector<vt::SparseVector>& rows,
                                const std::vector<vt::Label>& labels, double C,
                                std::size_t iterations = 2000000) {
    const std::size_t n = rows.size();
    std::vector<std::vector<double>> x;
    for (const auto& r : rows) x.push_back(densify(r));
    std::vector<double> y;
    for (vt::Label l : labels) y.push_back(static_cast<double>(static_cast<int>(l)));

    // Gram matrix with the bias feature folded in.
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 1.0;
            for (std::size_t d = 0; d < x[i].size(); ++d) dot += x[i][d] * x[j][d];
            q[i][j] = y[i] * y[j] * dot;
            if (i == j) trace += q[i][j];
        }
    double step = 1.0 / trace;  // 1/L with L bounded by tr(Q)

    std::vector<double> alpha(n, 0.0), grad(n);
    for (std::size_t it = 0; it < iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double g = 1.0;
            for (std::size_t j = 0; j < n; ++j) g -= q[i][j] * alpha[j];
            grad[i] = g;
        }
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double next = std::clamp(alpha[i] + step * grad[i], 0.0, C);
            moved += std::abs(next - alpha[i]);
            alpha[i] = next;
        }
        if (moved < 1e-14) break;
    }

    QpSolution sol;
    sol.weights.assign(x[0].size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < x[i].size(); ++d) sol.weights[d] += alpha[i] * y[i] * x[i][d];
        sol.bias += alpha[i] * y[i];
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        obj += alpha[i];
        for (std::size_t j = 0; j < n; ++j) obj -= 0.5 * alpha[i] * q[i][j] * alpha[j];
    }
    sol.dual_objective = obj;
    return sol;
}

// ---------------------------------------------------------------------------
// Random sparse instance generators (seeded, reused across suites).
// ---------------------------------------------------------------------------

inline std::vector<std::vector<std::string>> random_token_docs(std::mt19937_64& rng,
                                                               std::size_t max_docs,
                                                               std::size_t max_terms) {
    std::uniform_int_distribution<std::size_t> n_docs(1, max_docs);
    std::uniform_int_distribution<std::size_t> n_terms(1, max_terms);
    std::size_t docs = n_docs(rng), terms = n_terms(rng);
    std::vector<std::string> pool;
    for (std::size_t t = 0; t < terms; ++t) pool.push_back("t" + std::to_string(t));
    std::uniform_int_distribution<std::size_t> len(0, 30);
    std::uniform_int_distribution<std::size_t> pick(0, terms - 1);
    std::vector<std::vector<std::string>> out(docs);
    for (auto& doc : out) {
        std::size_t l = len(rng);
        for (std::size_t i = 0; i < l; ++i) doc.push_back(pool[pick(rng)]);
    }
    return out;
}

inline vt::FeatureMatrix random_sparse_matrix(std::mt19937_64& rng, std::size_t n_rows,
                                              std::uint32_t dim, double density) {
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    vt::FeatureMatrix m;
    m.dimension = dim;
    for (std::size_t r = 0; r < n_rows; ++r) {
        vt::SparseVector v;
        v.dimension = dim;
        for (std::uint32_t d = 0; d < dim; ++d)
            if (coin(rng) < density) v.entries.emplace_back(d, value(rng));
        m.rows.push_back(std::move(v));
        m.labels.push_back(coin(rng) < 0.5 ? vt::Label::Fake : vt::Label::True);
    }
    return m;
}
