#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace veritas {

struct Vocabulary {
    std::vector<std::string> terms;  // index -> term, lexicographic order
    std::unordered_map<std::string, std::uint32_t> term_to_index;
    std::vector<std::uint32_t> document_frequency;  // aligned with terms
    std::size_t total_documents = 0;
    std::optional<std::size_t> max_size;

    std::size_t size() const { return terms.size(); }
};

enum class IdfVariant { Plain, Smoothed };

struct IdfTable {
    std::vector<double> values;  // aligned with Vocabulary indices
    IdfVariant variant = IdfVariant::Smoothed;
};

struct SparseVector {
    std::vector<std::pair<std::uint32_t, double>> entries;  // strictly increasing indices, no zeros
    std::uint32_t dimension = 0;

    bool empty() const { return entries.empty(); }
};

// Collects terms from training documents only. With a cap, keeps the
// max_size terms with highest total term count (ties: lexicographically
// smaller term wins). Indices are assigned in lexicographic term order.
// Throws DataError when every document is empty.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& token_docs,
                            std::optional<std::size_t> max_size = std::nullopt);

// Plain:    idf(t) = ln(T / df(t))
// Smoothed: idf(t) = ln((1 + T) / (1 + df(t))) + 1
IdfTable compute_idf(const Vocabulary& vocab, IdfVariant variant = IdfVariant::Smoothed);

// weight(t) = count(t) / (in-vocabulary token total) * idf(t).
// Out-of-vocabulary tokens contribute nothing; zero weights are not stored.
SparseVector vectorize_document(const std::vector<std::string>& tokens,
                                const Vocabulary& vocab, const IdfTable& idf);

// Scales a nonzero vector to unit Euclidean norm; zero vector is returned
// unchanged.
SparseVector l2_normalize(const SparseVector& vec);

double dot(const SparseVector& a, const SparseVector& b);
double squared_norm(const SparseVector& v);

// TSV dump `term<TAB>index<TAB>document_frequency<TAB>idf`, sorted by index.
void dump_vocabulary(const Vocabulary& vocab, const IdfTable& idf, std::ostream& out);

}  // namespace veritas
