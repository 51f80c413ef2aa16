#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qaedit {

struct Token {
    std::string surface;
    std::size_t char_start = 0;
    std::size_t char_end = 0;  // exclusive
    bool is_word = false;
};

// Tokens carry character offsets into the source so that any edit can be
// checked against the original text.
struct TokenizedText {
    std::string source;
    std::vector<Token> tokens;
};

struct Span {
    std::size_t char_start = 0;
    std::size_t char_end = 0;  // exclusive
};

struct AnswerSpan {
    std::size_t char_start = 0;
    std::size_t char_end = 0;
    std::size_t sentence_index = 0;
};

struct Anchor {
    std::string token_surface;
    std::size_t char_start = 0;
    std::size_t token_distance_to_answer = 0;
};

/// Deterministic rule-based tokenizer: word tokens are maximal runs of
/// letters/digits/apostrophes, every other non-space character is its own
/// punctuation token.
TokenizedText tokenize(std::string_view text);

/// Sentence spans covering all non-whitespace characters, split at
/// sentence-final punctuation followed by whitespace and a capital,
/// with a guard list for common abbreviations.
std::vector<Span> split_sentences(std::string_view text);

/// First verbatim (case-sensitive) occurrence of the answer.
/// Throws AnswerNotFound when no occurrence exists.
AnswerSpan locate_answer(std::string_view context, std::string_view answer);

/// Closest question/context overlap word to the answer span, excluding
/// stopwords and tokens inside the answer. Ties break toward the token
/// preceding the answer, then the lower index. Empty overlap set -> nullopt.
std::optional<Anchor> find_anchor(const TokenizedText& context,
                                  const TokenizedText& question,
                                  const AnswerSpan& answer);

/// Number of word tokens strictly between two spans; 0 when adjacent or
/// overlapping.
std::size_t token_distance(const TokenizedText& context, const Span& a, const Span& b);

class EntityRecognizer {
public:
    virtual ~EntityRecognizer() = default;
    // One flag per token, true when the token is part of a named entity.
    virtual std::vector<bool> entity_flags(const TokenizedText& text) const = 0;
};

// Capitalized-not-at-sentence-start or numeric tokens count as entities.
class HeuristicEntityRecognizer : public EntityRecognizer {
public:
    std::vector<bool> entity_flags(const TokenizedText& text) const override;
};

/// Case-folded question words minus stopwords and entity tokens.
std::set<std::string> question_content_words(std::string_view question,
                                             const EntityRecognizer& recognizer);

/// |a n b| / |a u b|; 1.0 when both sets are empty.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// The sentence span containing the answer's start offset.
Span answer_sentence(std::string_view context, const AnswerSpan& answer);

bool is_stopword(std::string_view word);
std::string to_lower(std::string_view s);

}  // namespace qaedit
