#include "veritas/harness.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "veritas/errors.hpp"

namespace veritas {

using nlohmann::json;

const char* classifier_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::SVM: return "SVM";
        case ClassifierKind::KNN: return "KNN";
        case ClassifierKind::DT: return "DT";
    }
    return "?";
}

namespace {

ClassifierKind classifier_from_name(const std::string& name) {
    if (name == "SVM" || name == "svm") return ClassifierKind::SVM;
    if (name == "KNN" || name == "knn") return ClassifierKind::KNN;
    if (name == "DT" || name == "dt") return ClassifierKind::DT;
    throw ConfigError("unknown classifier '" + name + "'");
}

struct Resources {
    StopwordSet stopwords;
    StemRuleSet rules;
    LemmaLexicon lexicon;
};

Resources load_resources(const ResourcePaths& paths, NormalizationMode mode, bool all_modes) {
    Resources res;
    res.stopwords = load_stopwords(paths.stopwords);
    if (all_modes || mode == NormalizationMode::Stemming)
        res.rules = load_stem_rules(paths.stem_rules);
    if (all_modes || mode == NormalizationMode::Lemmatization)
        res.lexicon = load_lemma_lexicon(paths.lemma_lexicon);
    return res;
}

std::vector<std::vector<std::string>> normalize_corpus(const Corpus& corpus,
                                                       NormalizationMode mode,
                                                       const Resources& res) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(corpus.size());
    for (const Document& d : corpus.documents)
        docs.push_back(normalize_document(d.text, mode, res.stopwords, &res.rules, &res.lexicon));
    return docs;
}

FeatureMatrix vectorize_set(const std::vector<std::vector<std::string>>& token_docs,
                            const Corpus& corpus, const Vocabulary& vocab,
                            const IdfTable& idf) {
    FeatureMatrix m;
    m.dimension = static_cast<std::uint32_t>(vocab.size());
    m.rows.reserve(token_docs.size());
    for (const auto& tokens : token_docs)
        m.rows.push_back(l2_normalize(vectorize_document(tokens, vocab, idf)));
    for (const Document& d : corpus.documents) m.labels.push_back(d.label);
    return m;
}

Model train_classifier(const ExperimentConfig& cfg, const FeatureMatrix& train) {
    switch (cfg.classifier) {
        case ClassifierKind::SVM: {
            SvmHyperparams hp = cfg.svm;
            hp.seed = cfg.split.seed;
            return train_linear_svm(train, hp);
        }
        case ClassifierKind::KNN:
            return train_knn(train, cfg.knn_k);
        case ClassifierKind::DT:
            return train_decision_tree(train, cfg.tree);
    }
    throw ConfigError("unknown classifier kind");
}

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(name) + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(std::string(name) + ": " + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string setup_name(NormalizationMode mode, std::optional<std::size_t> max_features) {
    std::string base;
    switch (mode) {
        case NormalizationMode::StopwordsOnly: base = "Stop-Words Removal"; break;
        case NormalizationMode::Lemmatization: base = "Lemmatization Technique"; break;
        case NormalizationMode::Stemming: base = "Stemming Technique"; break;
    }
    if (max_features)
        base += " + Dictionary of " + std::to_string(*max_features) + " words";
    return base;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const Corpus& corpus) {
    auto start = std::chrono::steady_clock::now();

    Resources res = stage("resources", [&] { return load_resources(cfg.resources, cfg.mode, false); });
    auto [train_corpus, test_corpus] =
        stage("split", [&] { return split_train_test(corpus, cfg.split); });
    auto train_tokens =
        stage("normalize", [&] { return normalize_corpus(train_corpus, cfg.mode, res); });
    auto test_tokens =
        stage("normalize", [&] { return normalize_corpus(test_corpus, cfg.mode, res); });
    Vocabulary vocab =
        stage("vocabulary", [&] { return build_vocabulary(train_tokens, cfg.max_features); });
    IdfTable idf = stage("idf", [&] { return compute_idf(vocab, cfg.idf_variant); });
    FeatureMatrix train = stage("vectorize", [&] {
        return vectorize_set(train_tokens, train_corpus, vocab, idf);
    });
    FeatureMatrix test =
        stage("vectorize", [&] { return vectorize_set(test_tokens, test_corpus, vocab, idf); });
    Model model = stage("train", [&] { return train_classifier(cfg, train); });
    EvalReport eval = stage("evaluate", [&] { return evaluate(model, test); });

    ExperimentReport report;
    report.config = cfg;
    report.dictionary_size = vocab.size();
    report.eval = eval;
    report.seed = cfg.split.seed;
    report.wall_time_seconds = seconds_since(start);
    return report;
}

ResultsTable run_matrix(const Corpus& corpus, const ExperimentConfig& base) {
    static constexpr NormalizationMode kModes[] = {NormalizationMode::StopwordsOnly,
                                                   NormalizationMode::Lemmatization,
                                                   NormalizationMode::Stemming};
    static constexpr ClassifierKind kClassifiers[] = {ClassifierKind::SVM, ClassifierKind::KNN,
                                                      ClassifierKind::DT};
    const std::optional<std::size_t> kCaps[] = {std::nullopt, 500, 5000};

    Resources res = load_resources(base.resources, base.mode, true);
    // One split per seed, shared by all 27 cells.
    auto [train_corpus, test_corpus] = split_train_test(corpus, base.split);

    ResultsTable table;
    table.seed = base.split.seed;

    for (NormalizationMode mode : kModes) {
        auto run_cell_row = [&](const std::vector<std::vector<std::string>>& train_tokens,
                                const std::vector<std::vector<std::string>>& test_tokens,
                                std::optional<std::size_t> cap) {
            ResultsRow row;
            row.mode = mode;
            row.max_features = cap;
            Vocabulary vocab = build_vocabulary(train_tokens, cap);
            IdfTable idf = compute_idf(vocab, base.idf_variant);
            FeatureMatrix train = vectorize_set(train_tokens, train_corpus, vocab, idf);
            FeatureMatrix test = vectorize_set(test_tokens, test_corpus, vocab, idf);
            for (ClassifierKind classifier : kClassifiers) {
                auto start = std::chrono::steady_clock::now();
                ExperimentConfig cfg = base;
                cfg.mode = mode;
                cfg.max_features = cap;
                cfg.classifier = classifier;
                ExperimentReport report;
                report.config = cfg;
                report.dictionary_size = vocab.size();
                report.seed = cfg.split.seed;
                try {
                    Model model = train_classifier(cfg, train);
                    report.eval = evaluate(model, test);
                } catch (const std::exception& e) {
                    throw DataError("cell (" + setup_name(mode, cap) + ", " +
                                    classifier_name(classifier) + "): " + e.what());
                }
                report.wall_time_seconds = seconds_since(start);
                row.cells.push_back(std::move(report));
            }
            if (!cap) table.uncapped_sizes.emplace_back(mode, vocab.size());
            return row;
        };

        auto train_tokens = normalize_corpus(train_corpus, mode, res);
        auto test_tokens = normalize_corpus(test_corpus, mode, res);
        for (const auto& cap : kCaps)
            table.rows.push_back(run_cell_row(train_tokens, test_tokens, cap));
    }
    return table;
}

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "text") return ReportFormat::Text;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw ConfigError("unknown report format '" + name + "'");
}

namespace {

json confusion_to_json(const ConfusionMatrix& cm) {
    return json::array({json::array({cm.counts[0][0], cm.counts[0][1]}),
                        json::array({cm.counts[1][0], cm.counts[1][1]})});
}

ConfusionMatrix confusion_from_json(const json& j) {
    ConfusionMatrix cm;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            cm.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<std::size_t>();
    return cm;
}

std::string render_text(const ResultsTable& table) {
    std::ostringstream out;
    out << "Accuracy rates (%) for fake news classification\n\n";
    std::size_t name_width = 0;
    for (const ResultsRow& row : table.rows)
        name_width = std::max(name_width, setup_name(row.mode, row.max_features).size());
    auto pad = [&](const std::string& s, std::size_t w) {
        return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
    };
    out << pad("Experiment name", name_width) << "  " << pad("SVM", 8) << pad("KNN", 8)
        << pad("DT", 8) << '\n';
    for (const ResultsRow& row : table.rows) {
        out << pad(setup_name(row.mode, row.max_features), name_width) << "  ";
        for (const ExperimentReport& cell : row.cells)
            out << pad(format_percent(cell.eval.accuracy), 8);
        out << '\n';
    }
    out << "\nSize of the built dictionaries (uncapped)\n";
    for (const auto& [mode, size] : table.uncapped_sizes) {
        switch (mode) {
            case NormalizationMode::StopwordsOnly: out << "Stop-Word Removal"; break;
            case NormalizationMode::Lemmatization: out << "Lemmatizing"; break;
            case NormalizationMode::Stemming: out << "Stemming"; break;
        }
        out << ": " << size << " words\n";
    }
    return out.str();
}

std::string render_csv(const ResultsTable& table) {
    std::ostringstream out;
    out << "setup,classifier,accuracy,dictionary_size\n";
    for (const ResultsRow& row : table.rows)
        for (const ExperimentReport& cell : row.cells)
            out << setup_name(row.mode, row.max_features) << ','
                << classifier_name(cell.config.classifier) << ','
                << format_percent(cell.eval.accuracy) << ',' << cell.dictionary_size << '\n';
    return out.str();
}

std::string render_json(const ResultsTable& table, bool include_timings) {
    json root;
    root["schema"] = "veritas-report/1";
    root["seed"] = table.seed;
    json sizes = json::object();
    for (const auto& [mode, size] : table.uncapped_sizes) sizes[mode_name(mode)] = size;
    root["dictionary_sizes"] = sizes;
    json rows = json::array();
    for (const ResultsRow& row : table.rows) {
        json jrow;
        jrow["setup"] = setup_name(row.mode, row.max_features);
        jrow["mode"] = mode_name(row.mode);
        if (row.max_features)
            jrow["max_features"] = *row.max_features;
        else
            jrow["max_features"] = nullptr;
        json cells = json::array();
        for (const ExperimentReport& cell : row.cells) {
            json jcell;
            jcell["classifier"] = classifier_name(cell.config.classifier);
            jcell["accuracy"] = cell.eval.accuracy;
            jcell["dictionary_size"] = cell.dictionary_size;
            jcell["n_test"] = cell.eval.n_test;
            jcell["confusion"] = confusion_to_json(cell.eval.confusion);
            jcell["precision_fake"] = cell.eval.precision_fake;
            jcell["recall_fake"] = cell.eval.recall_fake;
            jcell["precision_true"] = cell.eval.precision_true;
            jcell["recall_true"] = cell.eval.recall_true;
            jcell["seed"] = cell.seed;
            if (include_timings) jcell["wall_time_seconds"] = cell.wall_time_seconds;
            cells.push_back(std::move(jcell));
        }
        jrow["cells"] = std::move(cells);
        rows.push_back(std::move(jrow));
    }
    root["rows"] = std::move(rows);
    return root.dump(2) + "\n";
}

}  // namespace

std::string render_report(const ResultsTable& table, ReportFormat format,
                          bool include_timings) {
    switch (format) {
        case ReportFormat::Text: return render_text(table);
        case ReportFormat::Csv: return render_csv(table);
        case ReportFormat::Json: return render_json(table, include_timings);
    }
    throw ConfigError("unknown report format");
}

ResultsTable parse_results_table(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DataError(std::string("bad report JSON: ") + e.what());
    }
    if (root.value("schema", "") != "veritas-report/1")
        throw DataError("unsupported report schema");
    ResultsTable table;
    table.seed = root.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : root.at("dictionary_sizes").items())
        table.uncapped_sizes.emplace_back(mode_from_name(key), value.get<std::size_t>());
    for (const json& jrow : root.at("rows")) {
        ResultsRow row;
        row.mode = mode_from_name(jrow.at("mode").get<std::string>());
        if (!jrow.at("max_features").is_null())
            row.max_features = jrow.at("max_features").get<std::size_t>();
        for (const json& jcell : jrow.at("cells")) {
            ExperimentReport cell;
            cell.config.mode = row.mode;
            cell.config.max_features = row.max_features;
            cell.config.classifier = classifier_from_name(jcell.at("classifier").get<std::string>());
            cell.dictionary_size = jcell.at("dictionary_size").get<std::size_t>();
            cell.seed = jcell.at("seed").get<std::uint64_t>();
            cell.eval = report_from_confusion(confusion_from_json(jcell.at("confusion")));
            row.cells.push_back(std::move(cell));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("bad config JSON in " + path.string() + ": " + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (root.contains("mode")) cfg.mode = mode_from_name(root["mode"].get<std::string>());
        if (root.contains("max_features") && !root["max_features"].is_null())
            cfg.max_features = root["max_features"].get<std::size_t>();
        if (root.contains("classifier"))
            cfg.classifier = classifier_from_name(root["classifier"].get<std::string>());
        if (root.contains("split")) {
            const json& s = root["split"];
            cfg.split.test_fraction = s.value("test_fraction", cfg.split.test_fraction);
            cfg.split.seed = s.value("seed", cfg.split.seed);
            cfg.split.stratified = s.value("stratified", cfg.split.stratified);
        }
        if (root.contains("idf_variant")) {
            std::string v = root["idf_variant"].get<std::string>();
            if (v == "plain") cfg.idf_variant = IdfVariant::Plain;
            else if (v == "smoothed") cfg.idf_variant = IdfVariant::Smoothed;
            else throw ConfigError("unknown idf_variant '" + v + "'");
        }
        if (root.contains("svm")) {
            const json& s = root["svm"];
            cfg.svm.C = s.value("C", cfg.svm.C);
            cfg.svm.tolerance = s.value("tolerance", cfg.svm.tolerance);
            cfg.svm.max_passes = s.value("max_passes", cfg.svm.max_passes);
        }
        if (root.contains("knn_k")) cfg.knn_k = root["knn_k"].get<std::size_t>();
        if (root.contains("tree")) {
            const json& t = root["tree"];
            if (t.contains("max_leaves") && !t["max_leaves"].is_null())
                cfg.tree.max_leaves = t["max_leaves"].get<std::size_t>();
            if (t.contains("max_depth") && !t["max_depth"].is_null())
                cfg.tree.max_depth = t["max_depth"].get<std::size_t>();
            if (cfg.tree.max_leaves && cfg.tree.max_depth)
                throw ConfigError("tree.max_leaves and tree.max_depth are mutually exclusive");
        }
        if (root.contains("resources")) {
            const json& r = root["resources"];
            auto resolve = [&](const std::string& p) {
                std::filesystem::path fp(p);
                return fp.is_absolute() ? fp : path.parent_path() / fp;
            };
            if (r.contains("stopwords"))
                cfg.resources.stopwords = resolve(r["stopwords"].get<std::string>());
            if (r.contains("stem_rules"))
                cfg.resources.stem_rules = resolve(r["stem_rules"].get<std::string>());
            if (r.contains("lemma_lexicon"))
                cfg.resources.lemma_lexicon = resolve(r["lemma_lexicon"].get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ConfigError("bad config value in " + path.string() + ": " + e.what());
    }
    return cfg;
}

}  // namespace veritas
