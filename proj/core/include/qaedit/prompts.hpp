#pragma once

#include <string>

namespace qaedit::prompts {

// Trigger-instruction and QA templates. These strings are frozen; snapshot
// tests assert them byte for byte, so any change is a format break.

extern const std::string kBaseDistractorInstruction;
extern const std::string kDistractorDemonstrations;
extern const std::string kExtendCoref;        // {base_distractor}
extern const std::string kExtendElaboration;  // {base_distractor}
extern const std::string kOverlapAnchor;      // {anchor}, {answer}, {text}
extern const std::string kLexicalOverlap;     // {q_words}, {answer}, {ans_sentence}
extern const std::string kQuestionAnswering;  // {question}, {text}
extern const std::string kBaselineRephrase;   // {gold label}, {text}
extern const std::string kBaselineExtension;  // {text}

std::string base_distractor_prompt(const std::string& question);
std::string extend_coref_prompt(const std::string& base_distractor);
std::string extend_elaboration_prompt(const std::string& base_distractor);
std::string overlap_anchor_prompt(const std::string& text, const std::string& anchor,
                                  const std::string& answer);
std::string lexical_overlap_prompt(const std::string& q_words, const std::string& ans_sentence,
                                   const std::string& answer);
std::string question_answering_prompt(const std::string& question, const std::string& text);
std::string baseline_rephrase_prompt(const std::string& gold_label, const std::string& text);
std::string baseline_extension_prompt(const std::string& text);

/// Reply parser for the base-distractor step: the text after the last
/// "Distractor:" marker, trimmed; the whole reply when no marker is present.
std::string extract_distractor(const std::string& reply);

}  // namespace qaedit::prompts
