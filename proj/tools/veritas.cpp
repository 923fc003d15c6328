// veritas CLI: run the experiment matrix, inspect corpora, spot-check the
// normalizers, dump vocabularies.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "veritas/errors.hpp"
#include "veritas/harness.hpp"

namespace fs = std::filesystem;
using namespace veritas;

namespace {

fs::path default_data_dir() {
    if (const char* env = std::getenv("VERITAS_DATA")) return env;
#ifdef VERITAS_DEFAULT_DATA_DIR
    return VERITAS_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

ResourcePaths default_resources() {
    fs::path dir = default_data_dir();
    return ResourcePaths{dir / "stopwords_pt.txt", dir / "stem_rules_pt.txt",
                         dir / "lemma_lexicon_pt.tsv"};
}

std::string corpus_or_env(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("VERITAS_CORPUS")) return env;
    throw ConfigError("no corpus given: use --corpus or set VERITAS_CORPUS");
}

void write_out(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + out_path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"veritas: Portuguese fake-news text classification pipeline"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Run the 9x3 experiment matrix");
    std::string run_corpus, run_config, run_format = "text", run_out;
    std::optional<std::uint64_t> run_seed;
    bool run_timings = false;
    run->add_option("--corpus", run_corpus, "Corpus root with fake/ and true/ subdirectories");
    run->add_option("--config", run_config, "JSON config file");
    run->add_option("--seed", run_seed, "Split seed (overrides config)");
    run->add_option("--format", run_format, "Output format: text|csv|json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    run->add_option("--out", run_out, "Write the report to this file instead of stdout");
    run->add_flag("--timings", run_timings, "Include wall times in the JSON report");

    // --- stats ---
    auto* stats = app.add_subcommand("stats", "Corpus statistics");
    std::string stats_corpus;
    stats->add_option("--corpus", stats_corpus, "Corpus root");

    // --- stem / lemma ---
    auto* stem = app.add_subcommand("stem", "Stem words with the shipped rule set");
    std::vector<std::string> stem_words;
    std::string stem_rules_path;
    stem->add_option("words", stem_words, "Words to stem")->required();
    stem->add_option("--rules", stem_rules_path, "Stem rule file");

    auto* lemma = app.add_subcommand("lemma", "Lemmatize words with the shipped lexicon");
    std::vector<std::string> lemma_words;
    std::string lemma_lexicon_path;
    lemma->add_option("words", lemma_words, "Words to lemmatize")->required();
    lemma->add_option("--lexicon", lemma_lexicon_path, "Lemma lexicon TSV");

    // --- vocab ---
    auto* vocab_cmd = app.add_subcommand("vocab", "Build and dump a vocabulary");
    std::string vocab_corpus, vocab_mode = "stopwords", vocab_out;
    std::optional<std::size_t> vocab_cap;
    vocab_cmd->add_option("--corpus", vocab_corpus, "Corpus root");
    vocab_cmd->add_option("--mode", vocab_mode, "stopwords|stem|lemma")
        ->check(CLI::IsMember({"stopwords", "stem", "lemma"}));
    vocab_cmd->add_option("--max-features", vocab_cap, "Vocabulary size cap");
    vocab_cmd->add_option("--out", vocab_out, "Output TSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ExperimentConfig cfg;
            if (!run_config.empty()) cfg = load_config(run_config);
            if (cfg.resources.stopwords.empty()) cfg.resources = default_resources();
            if (run_seed) cfg.split.seed = *run_seed;
            Corpus corpus = load_corpus(corpus_or_env(run_corpus));
            ResultsTable table = run_matrix(corpus, cfg);
            write_out(render_report(table, report_format_from_name(run_format), run_timings),
                      run_out);
        } else if (*stats) {
            Corpus corpus = load_corpus(corpus_or_env(stats_corpus));
            CorpusStats s = corpus_stats(corpus);
            std::cout << "documents: " << s.total_docs << '\n';
            for (const auto& [label, count] : s.docs_per_label)
                std::cout << "  " << label_name(label) << ": " << count << '\n';
            std::cout << "mean tokens per document: " << s.mean_tokens_per_doc << '\n';
            for (const auto& [label, count] : s.token_count_per_label)
                std::cout << "  tokens (" << label_name(label) << "): " << count << '\n';
        } else if (*stem) {
            fs::path path = stem_rules_path.empty() ? default_resources().stem_rules
                                                    : fs::path(stem_rules_path);
            StemRuleSet rules = load_stem_rules(path);
            for (const std::string& word : stem_words) {
                std::string t = strip_diacritics(word);
                std::cout << word << " -> " << stem_token(t, rules) << '\n';
            }
        } else if (*lemma) {
            fs::path path = lemma_lexicon_path.empty() ? default_resources().lemma_lexicon
                                                       : fs::path(lemma_lexicon_path);
            LemmaLexicon lexicon = load_lemma_lexicon(path);
            for (const std::string& word : lemma_words) {
                std::string t = strip_diacritics(word);
                std::cout << word << " -> " << lemmatize_token(t, lexicon) << '\n';
            }
        } else if (*vocab_cmd) {
            ResourcePaths res = default_resources();
            StopwordSet stopwords = load_stopwords(res.stopwords);
            StemRuleSet rules;
            LemmaLexicon lexicon;
            NormalizationMode mode = mode_from_name(vocab_mode);
            if (mode == NormalizationMode::Stemming) rules = load_stem_rules(res.stem_rules);
            if (mode == NormalizationMode::Lemmatization)
                lexicon = load_lemma_lexicon(res.lemma_lexicon);
            Corpus corpus = load_corpus(corpus_or_env(vocab_corpus));
            std::vector<std::vector<std::string>> docs;
            for (const Document& d : corpus.documents)
                docs.push_back(normalize_document(d.text, mode, stopwords, &rules, &lexicon));
            Vocabulary vocab = build_vocabulary(docs, vocab_cap);
            IdfTable idf = compute_idf(vocab);
            std::ostringstream buf;
            dump_vocabulary(vocab, idf, buf);
            write_out(buf.str(), vocab_out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
