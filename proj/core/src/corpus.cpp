#include "veritas/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "veritas/errors.hpp"
#include "veritas/normalize.hpp"

namespace fs = std::filesystem;

namespace veritas {

const char* label_name(Label l) { return l == Label::Fake ? "fake" : "true"; }

std::size_t Corpus::count(Label l) const {
    return static_cast<std::size_t>(std::count_if(
        documents.begin(), documents.end(), [&](const Document& d) { return d.label == l; }));
}

namespace {

bool doc_order(const Document& a, const Document& b) {
    if (a.label != b.label) return static_cast<int>(a.label) < static_cast<int>(b.label);
    return a.id < b.id;
}

void load_label_dir(const fs::path& dir, Label label, Corpus& corpus, std::ostream& diag) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            diag << "SKIPPED " << file.string() << " unreadable\n";
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
            diag << "SKIPPED " << file.string() << " empty\n";
            continue;
        }
        corpus.documents.push_back(Document{file.stem().string(), std::move(text), label});
    }
}

}  // namespace

Corpus load_corpus(const fs::path& root, std::ostream* diag) {
    std::ostream& d = diag ? *diag : std::cerr;
    Corpus corpus;
    corpus.source_path = root.string();
    for (auto [sub, label] : {std::pair{"fake", Label::Fake}, std::pair{"true", Label::True}}) {
        fs::path dir = root / sub;
        if (!fs::is_directory(dir))
            throw ConfigError("missing label directory '" + std::string(sub) + "' under " +
                              root.string());
        load_label_dir(dir, label, corpus, d);
    }
    if (corpus.documents.empty()) throw DataError("no documents loaded from " + root.string());
    std::sort(corpus.documents.begin(), corpus.documents.end(), doc_order);
    for (std::size_t i = 1; i < corpus.documents.size(); ++i) {
        if (corpus.documents[i - 1].label == corpus.documents[i].label &&
            corpus.documents[i - 1].id == corpus.documents[i].id)
            throw DataError("duplicate document id '" + corpus.documents[i].id + "'");
    }
    return corpus;
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, const SplitConfig& cfg) {
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
        throw ConfigError("test_fraction must be in (0,1)");
    if (corpus.documents.empty()) throw DataError("cannot split an empty corpus");

    const std::size_t n = corpus.documents.size();
    const std::size_t n_test =
        static_cast<std::size_t>(std::llround(cfg.test_fraction * static_cast<double>(n)));

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> test_indices;

    if (cfg.stratified) {
        // Strata in label order (Fake, True); documents are already sorted by
        // (label, id) so the strata are contiguous and deterministic.
        std::vector<std::vector<std::size_t>> strata(2);
        for (std::size_t i = 0; i < n; ++i)
            strata[corpus.documents[i].label == Label::Fake ? 0 : 1].push_back(i);
        for (const auto& s : strata) {
            if (s.size() < 2)
                throw DataError("stratified split needs at least 2 documents per label");
        }
        // Per-label quota: floors, then distribute the remainder by largest
        // fractional part so the overall total is exactly n_test.
        std::vector<std::size_t> quota(2);
        std::vector<double> frac(2);
        std::size_t assigned = 0;
        for (int s = 0; s < 2; ++s) {
            double want = cfg.test_fraction * static_cast<double>(strata[s].size());
            quota[s] = static_cast<std::size_t>(std::floor(want));
            frac[s] = want - std::floor(want);
            assigned += quota[s];
        }
        std::vector<int> order{0, 1};
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return frac[a] > frac[b]; });
        for (std::size_t r = assigned; r < n_test; ++r) quota[order[(r - assigned) % 2]] += 1;
        for (int s = 0; s < 2; ++s) {
            std::vector<std::size_t> idx = strata[s];
            std::shuffle(idx.begin(), idx.end(), rng);
            quota[s] = std::min(quota[s], idx.size());
            test_indices.insert(test_indices.end(), idx.begin(),
                                idx.begin() + static_cast<std::ptrdiff_t>(quota[s]));
        }
    } else {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        test_indices.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    }

    std::vector<bool> in_test(n, false);
    for (std::size_t i : test_indices) in_test[i] = true;

    Corpus train, test;
    train.source_path = corpus.source_path;
    test.source_path = corpus.source_path;
    for (std::size_t i = 0; i < n; ++i)
        (in_test[i] ? test : train).documents.push_back(corpus.documents[i]);
    return {std::move(train), std::move(test)};
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats stats;
    stats.total_docs = corpus.documents.size();
    stats.docs_per_label[Label::Fake] = 0;
    stats.docs_per_label[Label::True] = 0;
    stats.token_count_per_label[Label::Fake] = 0;
    stats.token_count_per_label[Label::True] = 0;
    std::size_t total_tokens = 0;
    for (const Document& doc : corpus.documents) {
        std::size_t tokens = tokenize(doc.text).size();
        stats.docs_per_label[doc.label] += 1;
        stats.token_count_per_label[doc.label] += tokens;
        total_tokens += tokens;
    }
    if (stats.total_docs > 0)
        stats.mean_tokens_per_doc =
            static_cast<double>(total_tokens) / static_cast<double>(stats.total_docs);
    return stats;
}

}  // namespace veritas
