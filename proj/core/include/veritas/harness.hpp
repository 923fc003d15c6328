#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "veritas/classify.hpp"
#include "veritas/corpus.hpp"
#include "veritas/eval.hpp"
#include "veritas/normalize.hpp"
#include "veritas/vectorize.hpp"

namespace veritas {

enum class ClassifierKind { SVM, KNN, DT };

const char* classifier_name(ClassifierKind k);

struct ResourcePaths {
    std::filesystem::path stopwords;
    std::filesystem::path stem_rules;
    std::filesystem::path lemma_lexicon;
};

struct ExperimentConfig {
    NormalizationMode mode = NormalizationMode::StopwordsOnly;
    std::optional<std::size_t> max_features;  // 500 | 5000 | unlimited
    ClassifierKind classifier = ClassifierKind::SVM;
    SplitConfig split;
    IdfVariant idf_variant = IdfVariant::Smoothed;
    SvmHyperparams svm;
    std::size_t knn_k = 3;
    TreeConfig tree;
    ResourcePaths resources;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::size_t dictionary_size = 0;
    EvalReport eval;
    double wall_time_seconds = 0.0;
    std::uint64_t seed = 0;
};

// Human-readable setup name for one (mode, cap) row.
std::string setup_name(NormalizationMode mode, std::optional<std::size_t> max_features);

struct ResultsRow {
    NormalizationMode mode;
    std::optional<std::size_t> max_features;
    // One report per classifier, ordered SVM, KNN, DT.
    std::vector<ExperimentReport> cells;
};

struct ResultsTable {
    std::vector<ResultsRow> rows;  // the 9 setups
    // Uncapped dictionary size per mode, ordered StopwordsOnly, Lemmatization, Stemming.
    std::vector<std::pair<NormalizationMode, std::size_t>> uncapped_sizes;
    std::uint64_t seed = 0;
};

// Runs the full (split -> normalize -> vocabulary -> idf -> vectorize ->
// l2-normalize -> train -> evaluate) pipeline for one configuration.
// Stage failures are rethrown with the stage name attached.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const Corpus& corpus);

// The 9 setups x 3 classifiers. All 27 cells share the split derived from
// base.split, and cells with the same (mode, cap) share their feature
// matrices, so columns are comparable.
ResultsTable run_matrix(const Corpus& corpus, const ExperimentConfig& base);

enum class ReportFormat { Text, Csv, Json };

ReportFormat report_format_from_name(const std::string& name);

// Timings are omitted unless `include_timings` is set so that equal-seed
// runs serialize identically.
std::string render_report(const ResultsTable& table, ReportFormat format,
                          bool include_timings = false);

// Inverse of the JSON rendering (accuracy grid, dictionary sizes,
// confusion matrices); used for round-trip checks.
ResultsTable parse_results_table(const std::string& json_text);

// Loads base settings from a JSON config file; any omitted field keeps its
// default. Throws ConfigError on malformed content.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace veritas
