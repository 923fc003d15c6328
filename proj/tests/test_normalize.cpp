#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "veritas/errors.hpp"
#include "veritas/normalize.hpp"

using namespace veritas;

TEST_CASE("tokenize") {
    CHECK(tokenize("Dilma continua, presidente!") ==
          std::vector<std::string>{"dilma", "continua", "presidente"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("   \t\n ") == std::vector<std::string>{});
    // digits and symbols separate; single letters are dropped
    CHECK(tokenize("R$ 100 é o valor") == std::vector<std::string>{"valor"});
    CHECK(tokenize("a1b2cd3") == std::vector<std::string>{"cd"});
    CHECK(tokenize("ELEIÇÃO Eleição") == std::vector<std::string>{"eleição", "eleição"});
}

TEST_CASE("strip_diacritics") {
    CHECK(strip_diacritics("eleição") == "eleicao");
    CHECK(strip_diacritics("brasil") == "brasil");
    CHECK(strip_diacritics("ação") == "acao");
    CHECK(strip_diacritics("àáâãäèéêëìíîïòóôõöùúûüçñ") == "aaaaaeeeeiiiiooooouuuucn");
}

TEST_CASE("strip_diacritics is idempotent and length-preserving in codepoints") {
    for (const std::string& w : {"eleições", "coração", "vovô", "saúde", "linguiça"}) {
        std::string once = strip_diacritics(w);
        CHECK(strip_diacritics(once) == once);
        CHECK(tokenize(once)[0].size() == once.size());
    }
}

TEST_CASE("remove_stopwords") {
    StopwordSet sw;
    sw.words = {"o", "de"};
    CHECK(remove_stopwords({"o", "presidente", "de", "o", "brasil"}, sw) ==
          std::vector<std::string>{"presidente", "brasil"});
    CHECK(remove_stopwords({"um", "dois"}, StopwordSet{}) ==
          std::vector<std::string>{"um", "dois"});
    CHECK(remove_stopwords({"o", "de", "o"}, sw) == std::vector<std::string>{});
}

TEST_CASE("remove_stopwords is idempotent") {
    StopwordSet sw = load_stopwords(kDataDir / "stopwords_pt.txt");
    std::vector<std::string> tokens = tokenize(
        "o governo do brasil nao confirmou a informacao divulgada pela imprensa nacional");
    auto once = remove_stopwords(tokens, sw);
    CHECK(remove_stopwords(once, sw) == once);
}

// ---------------------------------------------------------------------------
// Stemmer
// ---------------------------------------------------------------------------

namespace {

// Independent re-interpretation of the rule file, used as a cross-check
// oracle. Parses with streams and applies rules via explicit scans.
struct OracleStemmer {
    struct Rule {
        std::string suffix, repl;
        std::size_t min_stem;
        std::vector<std::string> exc;
    };
    struct Step {
        std::size_t minword;
        std::vector<Rule> rules;
    };
    std::vector<Step> steps;

    explicit OracleStemmer(const std::filesystem::path& path) {
        std::ifstream in(path);
        REQUIRE(in.good());
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (line.rfind("step:", 0) == 0) {
                std::size_t pos = line.find("minword:");
                steps.push_back({std::stoul(line.substr(pos + 8)), {}});
                continue;
            }
            std::istringstream ss(line);
            std::string suffix, min_stem, repl, excs;
            std::getline(ss, suffix, '|');
            std::getline(ss, min_stem, '|');
            std::getline(ss, repl, '|');
            std::getline(ss, excs);
            Rule r{suffix, repl, std::stoul(min_stem), {}};
            std::istringstream es(excs);
            std::string e;
            while (std::getline(es, e, ','))
                if (!e.empty()) r.exc.push_back(e);
            steps.back().rules.push_back(std::move(r));
        }
    }

    std::string stem(std::string w) const {
        for (const Step& step : steps) {
            if (w.size() < step.minword) continue;
            // pick the longest applicable suffix in this step
            const Rule* chosen = nullptr;
            for (const Rule& r : step.rules) {
                if (r.suffix.size() > w.size()) continue;
                if (w.substr(w.size() - r.suffix.size()) != r.suffix) continue;
                if (w.size() - r.suffix.size() < r.min_stem) continue;
                bool excluded = false;
                for (const auto& e : r.exc)
                    if (e == w) excluded = true;
                if (excluded) continue;
                if (!chosen || r.suffix.size() > chosen->suffix.size()) chosen = &r;
            }
            if (chosen)
                w = w.substr(0, w.size() - chosen->suffix.size()) + chosen->repl;
        }
        return w;
    }
};

}  // namespace

TEST_CASE("stem_token frozen examples") {
    StemRuleSet rules = load_stem_rules(kDataDir / "stem_rules_pt.txt");
    // Hand-applied against the shipped rule table.
    std::map<std::string, std::string> expected = {
        {"casas", "cas"},        {"meninas", "menin"},   {"lei", "lei"},
        {"felizmente", "feliz"}, {"eleicoes", "eleic"},  {"presidente", "presid"},
        {"cairam", "cair"},      {"falaram", "fal"},     {"governo", "govern"},
        {"bonito", "bonit"},     {"maes", "mae"},        {"portugues", "portugu"},
    };
    for (const auto& [word, stem] : expected) CHECK(stem_token(word, rules) == stem);
}

TEST_CASE("stem_token agrees with an independent rule interpreter") {
    StemRuleSet rules = load_stem_rules(kDataDir / "stem_rules_pt.txt");
    OracleStemmer oracle(kDataDir / "stem_rules_pt.txt");

    // every surface form and lemma in the shipped lexicon
    LemmaLexicon lex = load_lemma_lexicon(kDataDir / "lemma_lexicon_pt.tsv");
    std::size_t checked = 0;
    for (const auto& [surface, lemma] : lex.entries) {
        CHECK(stem_token(surface, rules) == oracle.stem(surface));
        CHECK(stem_token(lemma, rules) == oracle.stem(lemma));
        checked += 2;
    }
    CHECK(checked > 1000);
}

TEST_CASE("stem_token never lengthens") {
    StemRuleSet rules = load_stem_rules(kDataDir / "stem_rules_pt.txt");
    LemmaLexicon lex = load_lemma_lexicon(kDataDir / "lemma_lexicon_pt.tsv");
    for (const auto& [surface, lemma] : lex.entries) {
        CHECK(stem_token(surface, rules).size() <= surface.size());
        CHECK(stem_token(lemma, rules).size() <= lemma.size());
    }
}

TEST_CASE("lemmatize_token") {
    LemmaLexicon lex;
    lex.entries = {{"tinha", "ter"}, {"eleicoes", "eleicao"}};
    CHECK(lemmatize_token("tinha", lex) == "ter");
    CHECK(lemmatize_token("eleicoes", lex) == "eleicao");
    CHECK(lemmatize_token("presidente", lex) == "presidente");
}

TEST_CASE("shipped lexicon is lemma-closed, so lemmatization is idempotent") {
    LemmaLexicon lex = load_lemma_lexicon(kDataDir / "lemma_lexicon_pt.tsv");
    CHECK(lex.size() > 1000);
    for (const auto& [surface, lemma] : lex.entries) {
        // a lemma must map to itself or be absent
        auto it = lex.entries.find(lemma);
        bool closed = it == lex.entries.end() || it->second == lemma;
        CHECK(closed);
        CHECK(lemmatize_token(lemmatize_token(surface, lex), lex) ==
              lemmatize_token(surface, lex));
    }
}

TEST_CASE("normalize_document") {
    StopwordSet sw = load_stopwords(kDataDir / "stopwords_pt.txt");
    StemRuleSet rules = load_stem_rules(kDataDir / "stem_rules_pt.txt");
    LemmaLexicon lex = load_lemma_lexicon(kDataDir / "lemma_lexicon_pt.tsv");

    SUBCASE("stemming composes the per-token stages") {
        auto tokens =
            normalize_document("As casas caíram", NormalizationMode::Stemming, sw, &rules, &lex);
        CHECK(tokens == std::vector<std::string>{"cas", "cair"});
    }
    SUBCASE("stopwords-only with empty stopword set is strip+tokenize") {
        StopwordSet empty;
        auto tokens = normalize_document("Então: veja ISTO", NormalizationMode::StopwordsOnly,
                                         empty, nullptr, nullptr);
        CHECK(tokens == std::vector<std::string>{"entao", "veja", "isto"});
    }
    SUBCASE("empty text") {
        for (auto mode : {NormalizationMode::StopwordsOnly, NormalizationMode::Stemming,
                          NormalizationMode::Lemmatization})
            CHECK(normalize_document("", mode, sw, &rules, &lex).empty());
    }
    SUBCASE("missing resources are a configuration error") {
        CHECK_THROWS_AS(
            normalize_document("x", NormalizationMode::Stemming, sw, nullptr, nullptr),
            ConfigError);
        CHECK_THROWS_AS(
            normalize_document("x", NormalizationMode::Lemmatization, sw, nullptr, nullptr),
            ConfigError);
    }
}

TEST_CASE("resource loaders reject malformed input") {
    TempCorpusDir dir("loaders");

    SUBCASE("single-rule stem file") {
        dir.write("r.txt", "step:plural minword:3\ns|1||\n");
        StemRuleSet rules = load_stem_rules(dir.root / "r.txt");
        CHECK(stem_token("casas", rules) == "casa");
    }
    SUBCASE("stem rule with replacement longer than suffix") {
        dir.write("bad.txt", "step:x minword:1\na|1|ao|\n");
        CHECK_THROWS_WITH_AS(load_stem_rules(dir.root / "bad.txt"),
                             doctest::Contains("replacement longer"), ConfigError);
    }
    SUBCASE("stem rule line outside a step") {
        dir.write("bad2.txt", "s|1||\n");
        CHECK_THROWS_WITH_AS(load_stem_rules(dir.root / "bad2.txt"),
                             doctest::Contains(":1:"), ConfigError);
    }
    SUBCASE("lexicon basics") {
        dir.write("lex.tsv", "tinha\tter\n");
        LemmaLexicon lex = load_lemma_lexicon(dir.root / "lex.tsv");
        CHECK(lex.size() == 1);
        CHECK(lemmatize_token("tinha", lex) == "ter");
    }
    SUBCASE("duplicate lexicon key with conflicting lemma") {
        dir.write("dup.tsv", "x\ta\nx\tb\n");
        CHECK_THROWS_WITH_AS(load_lemma_lexicon(dir.root / "dup.tsv"),
                             doctest::Contains("duplicate key"), ConfigError);
    }
    SUBCASE("malformed lexicon line carries line number") {
        dir.write("noTab.tsv", "ok\tfine\nbroken-line\n");
        CHECK_THROWS_WITH_AS(load_lemma_lexicon(dir.root / "noTab.tsv"),
                             doctest::Contains(":2:"), ConfigError);
    }
    SUBCASE("stopword with whitespace") {
        dir.write("sw.txt", "bom dia\n");
        CHECK_THROWS_AS(load_stopwords(dir.root / "sw.txt"), ConfigError);
    }
}
