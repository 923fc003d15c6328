#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace veritas {

enum class Label : int { Fake = -1, True = +1 };

const char* label_name(Label l);

struct Document {
    std::string id;    // file stem, unique within a corpus
    std::string text;  // full news body, UTF-8
    Label label;
};

// Documents are kept sorted by (label, id) so two loads of the same
// directory produce identical corpora.
struct Corpus {
    std::vector<Document> documents;
    std::string source_path;

    std::size_t size() const { return documents.size(); }
    std::size_t count(Label l) const;
};

struct SplitConfig {
    double test_fraction = 0.3;
    std::uint64_t seed = 0;
    bool stratified = true;
};

struct CorpusStats {
    std::size_t total_docs = 0;
    std::map<Label, std::size_t> docs_per_label;
    double mean_tokens_per_doc = 0.0;
    std::map<Label, std::size_t> token_count_per_label;
};

// Loads `root/{fake,true}/*.txt`. Unreadable or empty files are skipped with
// a `SKIPPED <path> <reason>` line on `diag` (stderr by default).
// Throws ConfigError if a label directory is missing, DataError if no
// document could be loaded.
Corpus load_corpus(const std::filesystem::path& root, std::ostream* diag = nullptr);

// Deterministic seeded split. Stratified mode keeps per-label test counts
// within one document of test_fraction * count(label) while the overall test
// size is round(test_fraction * N).
std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus, const SplitConfig& cfg);

// Token counts use the normalize-module tokenizer.
CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace veritas
