#include "qaedit/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "qaedit/errors.hpp"

namespace qaedit {

namespace {

bool is_word_char(unsigned char c) {
    // Bytes >= 0x80 stay inside word tokens so UTF-8 sequences are not split.
    return std::isalnum(c) || c == '\'' || c >= 0x80;
}

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

const std::unordered_set<std::string>& stopwords() {
    static const std::unordered_set<std::string> kStopwords = {
        "a",     "an",    "the",   "and",   "or",    "but",   "if",    "then",
        "else",  "of",    "in",    "on",    "at",    "to",    "from",  "by",
        "for",   "with",  "about", "into",  "over",  "under", "after", "before",
        "again", "once",  "here",  "there", "all",   "any",   "both",  "each",
        "few",   "more",  "most",  "other", "some",  "such",  "no",    "nor",
        "not",   "only",  "own",   "same",  "so",    "than",  "too",   "very",
        "can",   "will",  "just",  "is",    "are",   "was",   "were",  "be",
        "been",  "being", "do",    "does",  "did",   "have",  "has",   "had",
        "i",     "you",   "he",    "she",   "it",    "we",    "they",  "this",
        "that",  "these", "those", "as",    "what",  "when",  "where", "which",
        "who",   "whom",  "why",   "how",   "its",   "his",   "her",   "their",
    };
    return kStopwords;
}

// Words that take a trailing period without ending a sentence.
const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> kAbbrev = {
        "dr",  "mr",   "mrs", "ms",  "prof", "st",  "jr",  "sr",
        "vs",  "etc",  "fig", "no",  "inc",  "ltd", "co",  "mt",
        "capt", "gen", "sen", "rep", "gov",  "rev", "hon", "approx",
    };
    return kAbbrev;
}

bool span_overlaps(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    return a0 < b1 && b0 < a1;
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_stopword(std::string_view word) {
    return stopwords().count(to_lower(word)) > 0;
}

TokenizedText tokenize(std::string_view text) {
    TokenizedText out;
    out.source = std::string(text);
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space(c)) {
            ++i;
            continue;
        }
        if (is_word_char(c)) {
            std::size_t start = i;
            while (i < n && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
            out.tokens.push_back({std::string(text.substr(start, i - start)), start, i, true});
        } else {
            out.tokens.push_back({std::string(text.substr(i, 1)), i, i + 1, false});
            ++i;
        }
    }
    return out;
}

std::vector<Span> split_sentences(std::string_view text) {
    std::vector<Span> spans;
    const std::size_t n = text.size();

    std::size_t seg_start = 0;
    auto flush = [&](std::size_t seg_end) {
        // Trim to the non-whitespace extent.
        std::size_t s = seg_start;
        while (s < seg_end && is_space(static_cast<unsigned char>(text[s]))) ++s;
        std::size_t e = seg_end;
        while (e > s && is_space(static_cast<unsigned char>(text[e - 1]))) --e;
        if (s < e) spans.push_back({s, e});
    };

    for (std::size_t i = 0; i < n; ++i) {
        char c = text[i];
        if (c != '.' && c != '!' && c != '?') continue;

        if (c == '.') {
            // Abbreviation guard: look at the word ending right before the dot.
            std::size_t w = i;
            while (w > seg_start && is_word_char(static_cast<unsigned char>(text[w - 1]))) --w;
            std::string word = to_lower(text.substr(w, i - w));
            if (abbreviations().count(word)) continue;
        }

        // Swallow a run of closing punctuation after the terminator.
        std::size_t j = i + 1;
        while (j < n && (text[j] == '"' || text[j] == '\'' || text[j] == ')' ||
                         text[j] == ']' || text[j] == '.' || text[j] == '!' ||
                         text[j] == '?')) {
            ++j;
        }
        std::size_t k = j;
        while (k < n && is_space(static_cast<unsigned char>(text[k]))) ++k;
        if (k == j) continue;  // no whitespace after the terminator
        if (k >= n) break;     // trailing terminator, handled by the final flush
        unsigned char next = static_cast<unsigned char>(text[k]);
        if (!std::isupper(next) && !(next == '"' || next == '\'')) continue;

        flush(j);
        seg_start = k;
        i = k - 1;
    }
    flush(n);
    return spans;
}

AnswerSpan locate_answer(std::string_view context, std::string_view answer) {
    if (answer.empty()) throw AnswerNotFound("");
    std::size_t pos = context.find(answer);
    if (pos == std::string_view::npos) throw AnswerNotFound(std::string(answer));
    AnswerSpan span;
    span.char_start = pos;
    span.char_end = pos + answer.size();
    auto sentences = split_sentences(context);
    span.sentence_index = 0;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        if (sentences[s].char_start <= pos &&
            (pos < sentences[s].char_end || s + 1 == sentences.size())) {
            span.sentence_index = s;
            break;
        }
        if (pos < sentences[s].char_start) {
            span.sentence_index = s;
            break;
        }
    }
    return span;
}

std::size_t token_distance(const TokenizedText& context, const Span& a, const Span& b) {
    if (span_overlaps(a.char_start, a.char_end, b.char_start, b.char_end)) return 0;
    const Span& lo = a.char_start <= b.char_start ? a : b;
    const Span& hi = a.char_start <= b.char_start ? b : a;
    std::size_t count = 0;
    for (const Token& t : context.tokens) {
        if (t.is_word && t.char_start >= lo.char_end && t.char_end <= hi.char_start) ++count;
    }
    return count;
}

std::optional<Anchor> find_anchor(const TokenizedText& context,
                                  const TokenizedText& question,
                                  const AnswerSpan& answer) {
    std::unordered_set<std::string> question_words;
    for (const Token& t : question.tokens) {
        if (t.is_word) question_words.insert(to_lower(t.surface));
    }

    std::optional<Anchor> best;
    bool best_precedes = false;
    Span answer_span{answer.char_start, answer.char_end};
    for (const Token& t : context.tokens) {
        if (!t.is_word) continue;
        if (span_overlaps(t.char_start, t.char_end, answer.char_start, answer.char_end)) continue;
        std::string folded = to_lower(t.surface);
        if (is_stopword(folded)) continue;
        if (!question_words.count(folded)) continue;

        std::size_t dist = token_distance(context, {t.char_start, t.char_end}, answer_span);
        bool precedes = t.char_end <= answer.char_start;
        if (!best || dist < best->token_distance_to_answer ||
            (dist == best->token_distance_to_answer && precedes && !best_precedes)) {
            best = Anchor{t.surface, t.char_start, dist};
            best_precedes = precedes;
        }
    }
    return best;
}

std::vector<bool> HeuristicEntityRecognizer::entity_flags(const TokenizedText& text) const {
    std::vector<bool> flags(text.tokens.size(), false);
    auto sentences = split_sentences(text.source);

    // Index of the first word token in each sentence.
    std::vector<bool> sentence_initial(text.tokens.size(), false);
    for (const Span& s : sentences) {
        for (std::size_t i = 0; i < text.tokens.size(); ++i) {
            const Token& t = text.tokens[i];
            if (t.is_word && t.char_start >= s.char_start && t.char_end <= s.char_end) {
                sentence_initial[i] = true;
                break;
            }
        }
    }

    for (std::size_t i = 0; i < text.tokens.size(); ++i) {
        const Token& t = text.tokens[i];
        if (!t.is_word || t.surface.empty()) continue;
        bool numeric = std::all_of(t.surface.begin(), t.surface.end(), [](unsigned char c) {
            return std::isdigit(c) != 0;
        });
        bool capitalized = std::isupper(static_cast<unsigned char>(t.surface[0])) != 0;
        if (numeric || (capitalized && !sentence_initial[i])) flags[i] = true;
    }
    return flags;
}

std::set<std::string> question_content_words(std::string_view question,
                                             const EntityRecognizer& recognizer) {
    TokenizedText tokens = tokenize(question);
    std::vector<bool> entity = recognizer.entity_flags(tokens);
    std::set<std::string> words;
    for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
        const Token& t = tokens.tokens[i];
        if (!t.is_word || entity[i]) continue;
        std::string folded = to_lower(t.surface);
        if (is_stopword(folded)) continue;
        words.insert(std::move(folded));
    }
    return words;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& w : a) inter += b.count(w);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

Span answer_sentence(std::string_view context, const AnswerSpan& answer) {
    auto sentences = split_sentences(context);
    if (sentences.empty()) return {0, context.size()};
    for (const Span& s : sentences) {
        if (s.char_start <= answer.char_start && answer.char_start < s.char_end) return s;
    }
    return sentences.back();
}

}  // namespace qaedit
