#include "veritas/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "veritas/errors.hpp"

namespace veritas {

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& token_docs,
                            std::optional<std::size_t> max_size) {
    // std::map keeps the terms in lexicographic order for index assignment.
    std::map<std::string, std::pair<std::uint64_t, std::uint32_t>> stats;  // term -> (count, df)
    std::size_t total_documents = 0;
    for (const auto& doc : token_docs) {
        ++total_documents;
        std::map<std::string, std::uint64_t> local;
        for (const std::string& t : doc) local[t] += 1;
        for (const auto& [term, count] : local) {
            auto& [total, df] = stats[term];
            total += count;
            df += 1;
        }
    }
    if (stats.empty()) throw DataError("cannot build a vocabulary: all documents are empty");

    Vocabulary vocab;
    vocab.total_documents = total_documents;
    vocab.max_size = max_size;

    if (max_size && stats.size() > *max_size) {
        // Highest total term count first; ties keep the lexicographically
        // smaller term (which the count-descending stable sort preserves,
        // since `stats` iterates in term order).
        std::vector<std::map<std::string, std::pair<std::uint64_t, std::uint32_t>>::iterator> by_count;
        by_count.reserve(stats.size());
        for (auto it = stats.begin(); it != stats.end(); ++it) by_count.push_back(it);
        std::stable_sort(by_count.begin(), by_count.end(),
                         [](const auto& a, const auto& b) {
                             return a->second.first > b->second.first;
                         });
        by_count.resize(*max_size);
        std::sort(by_count.begin(), by_count.end(),
                  [](const auto& a, const auto& b) { return a->first < b->first; });
        for (const auto& it : by_count) {
            vocab.term_to_index.emplace(it->first,
                                        static_cast<std::uint32_t>(vocab.terms.size()));
            vocab.terms.push_back(it->first);
            vocab.document_frequency.push_back(it->second.second);
        }
    } else {
        for (const auto& [term, cd] : stats) {
            vocab.term_to_index.emplace(term, static_cast<std::uint32_t>(vocab.terms.size()));
            vocab.terms.push_back(term);
            vocab.document_frequency.push_back(cd.second);
        }
    }
    return vocab;
}

IdfTable compute_idf(const Vocabulary& vocab, IdfVariant variant) {
    IdfTable table;
    table.variant = variant;
    table.values.reserve(vocab.size());
    const double total = static_cast<double>(vocab.total_documents);
    for (std::uint32_t df : vocab.document_frequency) {
        double idf;
        if (variant == IdfVariant::Plain)
            idf = std::log(total / static_cast<double>(df));
        else
            idf = std::log((1.0 + total) / (1.0 + static_cast<double>(df))) + 1.0;
        table.values.push_back(idf);
    }
    return table;
}

SparseVector vectorize_document(const std::vector<std::string>& tokens,
                                const Vocabulary& vocab, const IdfTable& idf) {
    if (idf.values.size() != vocab.size())
        throw DataError("idf table not aligned with vocabulary");
    std::map<std::uint32_t, std::uint64_t> counts;
    std::uint64_t in_vocab_total = 0;
    for (const std::string& t : tokens) {
        auto it = vocab.term_to_index.find(t);
        if (it == vocab.term_to_index.end()) continue;
        counts[it->second] += 1;
        ++in_vocab_total;
    }
    SparseVector vec;
    vec.dimension = static_cast<std::uint32_t>(vocab.size());
    for (const auto& [index, count] : counts) {
        double tf = static_cast<double>(count) / static_cast<double>(in_vocab_total);
        double weight = tf * idf.values[index];
        if (weight != 0.0) vec.entries.emplace_back(index, weight);
    }
    return vec;
}

SparseVector l2_normalize(const SparseVector& vec) {
    double norm2 = squared_norm(vec);
    if (norm2 == 0.0) return vec;
    double inv = 1.0 / std::sqrt(norm2);
    SparseVector out;
    out.dimension = vec.dimension;
    out.entries.reserve(vec.entries.size());
    for (const auto& [index, w] : vec.entries) out.entries.emplace_back(index, w * inv);
    return out;
}

double dot(const SparseVector& a, const SparseVector& b) {
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        if (a.entries[i].first < b.entries[j].first)
            ++i;
        else if (a.entries[i].first > b.entries[j].first)
            ++j;
        else
            sum += a.entries[i++].second * b.entries[j++].second;
    }
    return sum;
}

double squared_norm(const SparseVector& v) {
    double sum = 0.0;
    for (const auto& [index, w] : v.entries) sum += w * w;
    return sum;
}

void dump_vocabulary(const Vocabulary& vocab, const IdfTable& idf, std::ostream& out) {
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        out << vocab.terms[i] << '\t' << i << '\t' << vocab.document_frequency[i] << '\t'
            << idf.values[i] << '\n';
    }
}

}  // namespace veritas
