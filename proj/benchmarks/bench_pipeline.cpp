#include <benchmark/benchmark.h>

#include "veritas/corpus.hpp"
#include "veritas/normalize.hpp"
#include "veritas/vectorize.hpp"

namespace {

const std::filesystem::path kDataDir = VERITAS_DATA_DIR;

const veritas::Corpus& mini_corpus() {
    static veritas::Corpus corpus = veritas::load_corpus(kDataDir / "mini_corpus");
    return corpus;
}

std::string all_text() {
    std::string text;
    for (const auto& doc : mini_corpus().documents) text += doc.text;
    return text;
}

void BM_Tokenize(benchmark::State& state) {
    std::string text = all_text();
    for (auto _ : state) benchmark::DoNotOptimize(veritas::tokenize(text));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_StemCorpus(benchmark::State& state) {
    auto rules = veritas::load_stem_rules(kDataDir / "stem_rules_pt.txt");
    auto tokens = veritas::tokenize(all_text());
    for (auto& t : tokens) t = veritas::strip_diacritics(t);
    for (auto _ : state) {
        for (const auto& t : tokens) benchmark::DoNotOptimize(veritas::stem_token(t, rules));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * tokens.size()));
}
BENCHMARK(BM_StemCorpus);

void BM_VectorizeCorpus(benchmark::State& state) {
    auto stopwords = veritas::load_stopwords(kDataDir / "stopwords_pt.txt");
    std::vector<std::vector<std::string>> docs;
    for (const auto& doc : mini_corpus().documents)
        docs.push_back(veritas::normalize_document(
            doc.text, veritas::NormalizationMode::StopwordsOnly, stopwords, nullptr, nullptr));
    auto vocab = veritas::build_vocabulary(docs);
    auto idf = veritas::compute_idf(vocab);
    for (auto _ : state) {
        for (const auto& tokens : docs)
            benchmark::DoNotOptimize(
                veritas::l2_normalize(veritas::vectorize_document(tokens, vocab, idf)));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * docs.size()));
}
BENCHMARK(BM_VectorizeCorpus);

}  // namespace

BENCHMARK_MAIN();
