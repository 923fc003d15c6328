#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace veritas {

enum class NormalizationMode { StopwordsOnly, Stemming, Lemmatization };

const char* mode_name(NormalizationMode m);
NormalizationMode mode_from_name(std::string_view name);

// Lowercase maximal runs of Unicode letters, length >= 2 codepoints.
// Digits, punctuation and symbols are separators.
std::vector<std::string> tokenize(std::string_view text);

// a-acute -> a, c-cedilla -> c and so on; idempotent.
std::string strip_diacritics(std::string_view token);

struct StopwordSet {
    std::unordered_set<std::string> words;

    bool contains(const std::string& w) const { return words.count(w) != 0; }
};

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordSet& stopwords);

// One suffix-rewriting rule. Suffix/replacement/exceptions are stored
// diacritic-free; min_stem bounds the residue length after suffix removal.
struct StemRule {
    std::string suffix;
    std::size_t min_stem = 0;
    std::string replacement;
    std::vector<std::string> exceptions;  // full surface forms the rule must not touch
};

struct StemStep {
    std::string name;
    std::size_t min_word_length = 0;
    std::vector<StemRule> rules;  // ordered longest-suffix-first
};

struct StemRuleSet {
    std::vector<StemStep> steps;
};

struct LemmaLexicon {
    std::unordered_map<std::string, std::string> entries;

    std::size_t size() const { return entries.size(); }
};

// Applies each step once, in order. Within a step the first matching rule
// whose min_stem and exception constraints pass fires and ends the step.
std::string stem_token(const std::string& token, const StemRuleSet& rules);

// Lexicon hit -> lemma, miss -> identity.
std::string lemmatize_token(const std::string& token, const LemmaLexicon& lexicon);

// tokenize -> strip_diacritics -> remove_stopwords -> per-token mode transform.
// `rules` / `lexicon` may be null when the mode does not need them; passing
// null for a mode that does throws ConfigError.
std::vector<std::string> normalize_document(std::string_view text, NormalizationMode mode,
                                            const StopwordSet& stopwords,
                                            const StemRuleSet* rules,
                                            const LemmaLexicon* lexicon);

// File formats:
//   stopwords: one token per line, `#` comments
//   stem rules: `step:<name> minword:<n>` headers, then
//               `suffix|min_stem|replacement|exc1,exc2,...` lines
//   lemma lexicon: `surface<TAB>lemma` TSV, `#` comments
// All patterns, keys and values are diacritic-stripped at load.
StopwordSet load_stopwords(const std::filesystem::path& path);
StemRuleSet load_stem_rules(const std::filesystem::path& path);
LemmaLexicon load_lemma_lexicon(const std::filesystem::path& path);

}  // namespace veritas
