#include "veritas/normalize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "veritas/errors.hpp"

namespace veritas {

namespace {

// Minimal UTF-8 decoding; invalid bytes are treated as separators.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
        ++i;
        return c;
    }
    int extra;
    char32_t cp;
    if ((c & 0xE0) == 0xC0) {
        extra = 1;
        cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
        extra = 2;
        cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
        extra = 3;
        cp = c & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + static_cast<std::size_t>(extra) >= s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k <= extra; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += static_cast<std::size_t>(extra) + 1;
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_letter(char32_t cp) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
    // Latin-1 supplement letters, minus multiply/divide signs.
    if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) return true;
    // Latin Extended-A.
    if (cp >= 0x100 && cp <= 0x17F) return true;
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    return cp;
}

char32_t base_letter(char32_t cp) {
    switch (cp) {
        case U'à': case U'á': case U'â': case U'ã': case U'ä': case U'å': return 'a';
        case U'è': case U'é': case U'ê': case U'ë': return 'e';
        case U'ì': case U'í': case U'î': case U'ï': return 'i';
        case U'ò': case U'ó': case U'ô': case U'õ': case U'ö': return 'o';
        case U'ù': case U'ú': case U'û': case U'ü': return 'u';
        case U'ç': return 'c';
        case U'ñ': return 'n';
        case U'ý': case U'ÿ': return 'y';
        default: return cp;
    }
}

std::size_t codepoint_length(std::string_view token) {
    std::size_t n = 0, i = 0;
    while (i < token.size()) {
        decode_utf8(token, i);
        ++n;
    }
    return n;
}

bool ends_with(const std::string& w, const std::string& suffix) {
    return w.size() >= suffix.size() &&
           w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

const char* mode_name(NormalizationMode m) {
    switch (m) {
        case NormalizationMode::StopwordsOnly: return "stopwords";
        case NormalizationMode::Stemming: return "stem";
        case NormalizationMode::Lemmatization: return "lemma";
    }
    return "?";
}

NormalizationMode mode_from_name(std::string_view name) {
    if (name == "stopwords" || name == "stopwords-only" || name == "none")
        return NormalizationMode::StopwordsOnly;
    if (name == "stem" || name == "stemming") return NormalizationMode::Stemming;
    if (name == "lemma" || name == "lemmatization") return NormalizationMode::Lemmatization;
    throw ConfigError("unknown normalization mode '" + std::string(name) + "'");
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t current_len = 0;
    std::size_t i = 0;
    auto flush = [&] {
        if (current_len >= 2) tokens.push_back(current);
        current.clear();
        current_len = 0;
    };
    while (i < text.size()) {
        char32_t cp = decode_utf8(text, i);
        if (is_letter(cp)) {
            encode_utf8(to_lower(cp), current);
            ++current_len;
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::string strip_diacritics(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    std::size_t i = 0;
    while (i < token.size()) {
        char32_t cp = decode_utf8(token, i);
        encode_utf8(base_letter(cp), out);
    }
    return out;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const StopwordSet& stopwords) {
    std::erase_if(tokens, [&](const std::string& t) { return stopwords.contains(t); });
    return tokens;
}

std::string stem_token(const std::string& token, const StemRuleSet& rules) {
    std::string word = token;
    for (const StemStep& step : rules.steps) {
        if (word.size() < step.min_word_length) continue;
        for (const StemRule& rule : step.rules) {
            if (!ends_with(word, rule.suffix)) continue;
            std::size_t stem_len = word.size() - rule.suffix.size();
            if (stem_len < rule.min_stem) continue;
            if (std::find(rule.exceptions.begin(), rule.exceptions.end(), word) !=
                rule.exceptions.end())
                continue;
            word = word.substr(0, stem_len) + rule.replacement;
            break;  // one rule per step
        }
    }
    return word;
}

std::string lemmatize_token(const std::string& token, const LemmaLexicon& lexicon) {
    auto it = lexicon.entries.find(token);
    return it != lexicon.entries.end() ? it->second : token;
}

std::vector<std::string> normalize_document(std::string_view text, NormalizationMode mode,
                                            const StopwordSet& stopwords,
                                            const StemRuleSet* rules,
                                            const LemmaLexicon* lexicon) {
    if (mode == NormalizationMode::Stemming && rules == nullptr)
        throw ConfigError("stemming mode requires a stem rule set");
    if (mode == NormalizationMode::Lemmatization && lexicon == nullptr)
        throw ConfigError("lemmatization mode requires a lemma lexicon");

    std::vector<std::string> tokens = tokenize(text);
    for (std::string& t : tokens) t = strip_diacritics(t);
    tokens = remove_stopwords(std::move(tokens), stopwords);
    switch (mode) {
        case NormalizationMode::StopwordsOnly:
            break;
        case NormalizationMode::Stemming:
            for (std::string& t : tokens) t = stem_token(t, *rules);
            break;
        case NormalizationMode::Lemmatization:
            for (std::string& t : tokens) t = lemmatize_token(t, *lexicon);
            break;
    }
    return tokens;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open stopword file " + path.string());
    StopwordSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.find_first_of(" \t") != std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": stopword contains whitespace");
        std::string word = strip_diacritics(line);
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        set.words.insert(word);
    }
    return set;
}

StemRuleSet load_stem_rules(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open stem rule file " + path.string());
    StemRuleSet rules;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto fail = [&](const std::string& why) -> ConfigError {
            return ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + why);
        };
        if (line.rfind("step:", 0) == 0) {
            std::istringstream ss(line);
            std::string step_tok, minword_tok;
            ss >> step_tok >> minword_tok;
            if (minword_tok.rfind("minword:", 0) != 0) throw fail("expected 'minword:<n>'");
            StemStep step;
            step.name = step_tok.substr(5);
            try {
                step.min_word_length = std::stoul(minword_tok.substr(8));
            } catch (const std::exception&) {
                throw fail("bad minword value");
            }
            rules.steps.push_back(std::move(step));
            continue;
        }
        if (rules.steps.empty()) throw fail("rule before any step header");
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t pos = 0; pos <= line.size(); ++pos) {
            if (pos == line.size() || line[pos] == '|') {
                fields.push_back(line.substr(start, pos - start));
                start = pos + 1;
            }
        }
        if (fields.size() != 4) throw fail("expected 'suffix|min_stem|replacement|exceptions'");
        StemRule rule;
        rule.suffix = strip_diacritics(fields[0]);
        if (rule.suffix.empty()) throw fail("empty suffix");
        try {
            rule.min_stem = std::stoul(fields[1]);
        } catch (const std::exception&) {
            throw fail("bad min_stem value");
        }
        rule.replacement = strip_diacritics(fields[2]);
        if (rule.replacement.size() > rule.suffix.size())
            throw fail("replacement longer than suffix");
        if (!fields[3].empty()) {
            std::istringstream ss(fields[3]);
            std::string exc;
            while (std::getline(ss, exc, ',')) {
                exc = trim(exc);
                if (!exc.empty()) rule.exceptions.push_back(strip_diacritics(exc));
            }
        }
        rules.steps.back().rules.push_back(std::move(rule));
    }
    // Longest-suffix-first within each step; stable so the file order breaks
    // length ties.
    for (StemStep& step : rules.steps) {
        std::stable_sort(step.rules.begin(), step.rules.end(),
                         [](const StemRule& a, const StemRule& b) {
                             return a.suffix.size() > b.suffix.size();
                         });
    }
    return rules;
}

LemmaLexicon load_lemma_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lemma lexicon " + path.string());
    LemmaLexicon lexicon;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected 'surface<TAB>lemma'");
        std::string surface = strip_diacritics(trim(line.substr(0, tab)));
        std::string lemma = strip_diacritics(trim(line.substr(tab + 1)));
        auto [it, inserted] = lexicon.entries.emplace(surface, lemma);
        if (!inserted && it->second != lemma)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": duplicate key '" + surface + "' with conflicting lemma");
    }
    return lexicon;
}

}  // namespace veritas
