#include "qaedit/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "qaedit/errors.hpp"
#include "qaedit/metrics.hpp"
#include "qaedit/prompts.hpp"
#include "qaedit/text.hpp"

namespace qaedit {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool contains_any_gold(const std::string& text, const std::vector<std::string>& golds) {
    std::string norm = normalize(text);
    for (const auto& gold : golds) {
        std::string g = normalize(gold);
        if (!g.empty() && norm.find(g) != std::string::npos) return true;
    }
    return false;
}

// First gold answer with a verbatim occurrence in the context.
const std::string* primary_gold(const std::string& context, const std::vector<std::string>& golds) {
    for (const auto& gold : golds) {
        if (!gold.empty() && context.find(gold) != std::string::npos) return &gold;
    }
    return nullptr;
}

Candidate guide_score(Backend& guide, const std::string& context, const MRCSample& sample,
                      const std::string& edited_text) {
    Completion reply = answer_question(guide, context, sample.question);
    return score_candidate(edited_text, reply.text, sample.golds, confidence(reply));
}

std::set<std::string> sentence_words(const std::string& sentence) {
    std::set<std::string> words;
    for (const Token& t : tokenize(sentence).tokens) {
        if (!t.is_word) continue;
        std::string folded = to_lower(t.surface);
        if (!is_stopword(folded)) words.insert(std::move(folded));
    }
    return words;
}

// Minimal token distance from any occurrence of the anchor word to the answer.
std::optional<std::size_t> anchor_distance(const std::string& context, const std::string& anchor,
                                           const std::string& answer) {
    std::size_t pos = context.find(answer);
    if (pos == std::string::npos) return std::nullopt;
    TokenizedText tokens = tokenize(context);
    Span answer_span{pos, pos + answer.size()};
    std::string folded = to_lower(anchor);
    std::optional<std::size_t> best;
    for (const Token& t : tokens.tokens) {
        if (!t.is_word || to_lower(t.surface) != folded) continue;
        if (t.char_start < answer_span.char_end && answer_span.char_start < t.char_end) continue;
        std::size_t d = token_distance(tokens, {t.char_start, t.char_end}, answer_span);
        if (!best || d < *best) best = d;
    }
    return best;
}

StepRecord disabled_step(StepName name) {
    StepRecord record;
    record.step_name = name;
    record.skipped_reason = "step disabled";
    return record;
}

}  // namespace

std::string to_string(StepName s) {
    switch (s) {
        case StepName::distractor: return "distractor";
        case StepName::extend: return "extend";
        case StepName::position: return "position";
        case StepName::anchor: return "anchor";
        case StepName::lexical: return "lexical";
    }
    return "?";
}

std::string to_string(DistractorPosition p) {
    return p == DistractorPosition::beginning ? "beginning" : "end";
}

std::string to_string(DistractorKind k) {
    switch (k) {
        case DistractorKind::base: return "base";
        case DistractorKind::extended_coref: return "extended_coref";
        case DistractorKind::extended_elaboration: return "extended_elaboration";
    }
    return "?";
}

Candidate generate_base_distractor(const MRCSample& sample, Backend& editor, Backend& guide,
                                   const PipelineConfig& cfg, StepRecord& record) {
    record.step_name = StepName::distractor;
    const std::string prompt = prompts::base_distractor_prompt(sample.question);

    std::vector<std::string> valid;
    for (int round = 0; round <= cfg.max_validator_retries && valid.empty(); ++round) {
        for (int i = 0; i < cfg.candidates_per_step; ++i) {
            Completion reply = editor.complete(prompt, false);
            std::string distractor = prompts::extract_distractor(reply.text);
            bool ok = !distractor.empty() && !contains_any_gold(distractor, sample.golds);
            record.validator_results.push_back({"distractor answer-free", ok});
            if (ok) valid.push_back(std::move(distractor));
        }
    }
    if (valid.empty()) {
        record.skipped_reason = "distractor generation failed validation";
        throw SampleDiscarded("sample " + sample.id + ": no valid distractor after retries");
    }

    for (const std::string& distractor : valid) {
        record.candidates.push_back(
            guide_score(guide, distractor + " " + sample.context, sample, distractor));
    }
    record.chosen_index = static_cast<int>(select_most_misleading_index(record.candidates));
    return record.candidates[record.chosen_index];
}

std::vector<PositionedDistractor> extend_distractor(const std::string& base,
                                                    const MRCSample& sample, Backend& editor,
                                                    StepRecord& record) {
    record.step_name = StepName::extend;
    std::vector<PositionedDistractor> kept;

    std::string coref = trim(editor.complete(prompts::extend_coref_prompt(base), false).text);
    bool coref_ok = !coref.empty() && !contains_any_gold(coref, sample.golds);
    record.validator_results.push_back({"coref extension answer-free", coref_ok});
    if (coref_ok) kept.push_back({coref, DistractorKind::extended_coref});

    std::string followup =
        trim(editor.complete(prompts::extend_elaboration_prompt(base), false).text);
    std::string elaboration = base + " " + followup;
    bool elab_ok = !followup.empty() && !contains_any_gold(elaboration, sample.golds);
    record.validator_results.push_back({"elaboration answer-free", elab_ok});
    if (elab_ok) kept.push_back({elaboration, DistractorKind::extended_elaboration});

    for (const auto& variant : kept) {
        Candidate c;
        c.edited_text = variant.text;
        record.candidates.push_back(c);
    }
    if (kept.empty()) {
        record.skipped_reason = "no extension passed validation";
    } else {
        record.chosen_index = 0;  // deterministic step, both variants move on
    }
    return kept;
}

PositionChoice position_distractor(const std::string& context, const MRCSample& sample,
                                   const std::vector<PositionedDistractor>& distractors,
                                   Backend& guide, StepRecord& record) {
    record.step_name = StepName::position;
    if (distractors.empty()) {
        record.skipped_reason = "no distractor to position";
        return {context, "", DistractorPosition::end, DistractorKind::base};
    }

    struct Meta {
        const PositionedDistractor* distractor;
        DistractorPosition position;
    };
    std::vector<Meta> meta;
    for (const auto& d : distractors) {
        std::string beginning = d.text + " " + context;
        std::string end = context + " " + d.text;
        record.candidates.push_back(guide_score(guide, beginning, sample, beginning));
        meta.push_back({&d, DistractorPosition::beginning});
        record.candidates.push_back(guide_score(guide, end, sample, end));
        meta.push_back({&d, DistractorPosition::end});
    }
    record.chosen_index = static_cast<int>(select_most_misleading_index(record.candidates));
    const Meta& chosen = meta[record.chosen_index];
    return {record.candidates[record.chosen_index].edited_text, chosen.distractor->text,
            chosen.position, chosen.distractor->kind};
}

std::string edit_overlap_anchor(const std::string& context, const MRCSample& sample,
                                Backend& editor, Backend& guide, const PipelineConfig& cfg,
                                StepRecord& record, std::size_t* distance_before,
                                std::size_t* distance_after) {
    record.step_name = StepName::anchor;
    const std::string* gold = primary_gold(context, sample.golds);
    if (!gold) {
        record.skipped_reason = "answer not found in context";
        return context;
    }
    TokenizedText ctx_tokens = tokenize(context);
    TokenizedText q_tokens = tokenize(sample.question);
    AnswerSpan answer = locate_answer(context, *gold);
    std::optional<Anchor> anchor = find_anchor(ctx_tokens, q_tokens, answer);
    if (!anchor) {
        record.skipped_reason = "no anchor";
        return context;
    }
    std::size_t before = anchor->token_distance_to_answer;
    if (distance_before) *distance_before = before;
    if (distance_after) *distance_after = before;

    const std::string prompt =
        prompts::overlap_anchor_prompt(context, anchor->token_surface, *gold);
    std::vector<std::size_t> distances;
    for (int i = 0; i < cfg.candidates_per_step; ++i) {
        std::string rewritten = trim(editor.complete(prompt, false).text);
        bool answer_ok = rewritten.find(*gold) != std::string::npos;
        record.validator_results.push_back({"answer verbatim", answer_ok});
        std::optional<std::size_t> dist =
            answer_ok ? anchor_distance(rewritten, anchor->token_surface, *gold) : std::nullopt;
        bool anchor_ok = dist.has_value();
        record.validator_results.push_back({"anchor verbatim", anchor_ok});
        bool increased = anchor_ok && *dist > before;
        record.validator_results.push_back({"distance increased", increased});
        if (answer_ok && anchor_ok && increased) {
            record.candidates.push_back(guide_score(guide, rewritten, sample, rewritten));
            distances.push_back(*dist);
        }
    }
    if (record.candidates.empty()) {
        record.skipped_reason = "no candidate passed validation";
        return context;
    }
    record.chosen_index = static_cast<int>(select_most_misleading_index(record.candidates));
    if (distance_after) *distance_after = distances[record.chosen_index];
    return record.candidates[record.chosen_index].edited_text;
}

std::string reduce_lexical_overlap(const std::string& context, const MRCSample& sample,
                                   Backend& editor, Backend& guide, const PipelineConfig& cfg,
                                   StepRecord& record, double* jaccard_before,
                                   double* jaccard_after) {
    record.step_name = StepName::lexical;
    const std::string* gold = primary_gold(context, sample.golds);
    if (!gold) {
        record.skipped_reason = "answer not found in context";
        return context;
    }
    AnswerSpan answer = locate_answer(context, *gold);
    Span sentence = answer_sentence(context, answer);
    std::string sentence_text = context.substr(sentence.char_start,
                                               sentence.char_end - sentence.char_start);

    HeuristicEntityRecognizer recognizer;
    std::set<std::string> q_words = question_content_words(sample.question, recognizer);
    std::string q_words_joined;
    for (const auto& w : q_words) {
        if (!q_words_joined.empty()) q_words_joined += ", ";
        q_words_joined += w;
    }
    double before = jaccard(q_words, sentence_words(sentence_text));
    if (jaccard_before) *jaccard_before = before;
    if (jaccard_after) *jaccard_after = before;

    const std::string prompt =
        prompts::lexical_overlap_prompt(q_words_joined, sentence_text, *gold);
    std::vector<double> after_scores;
    for (int i = 0; i < cfg.lexical_overlap_attempts; ++i) {
        std::string rewritten = trim(editor.complete(prompt, false).text);
        bool answer_ok = rewritten.find(*gold) != std::string::npos;
        record.validator_results.push_back({"answer verbatim", answer_ok});
        double after = answer_ok ? jaccard(q_words, sentence_words(rewritten)) : before;
        bool reduced = answer_ok && after < before;
        record.validator_results.push_back({"jaccard reduced", reduced});
        if (answer_ok && reduced) {
            std::string spliced = context.substr(0, sentence.char_start) + rewritten +
                                  context.substr(sentence.char_end);
            record.candidates.push_back(guide_score(guide, spliced, sample, spliced));
            after_scores.push_back(after);
        }
    }
    if (record.candidates.empty()) {
        record.skipped_reason = "no attempt passed validation";
        return context;
    }
    record.chosen_index = static_cast<int>(select_most_misleading_index(record.candidates));
    if (jaccard_after) *jaccard_after = after_scores[record.chosen_index];
    return record.candidates[record.chosen_index].edited_text;
}

EditTrace run_pipeline(const MRCSample& sample, const PipelineConfig& cfg, Backend& editor,
                       Backend& guide) {
    if (!primary_gold(sample.context, sample.golds)) {
        throw SampleDiscarded("sample " + sample.id + ": no gold answer occurs in context");
    }

    EditTrace trace;
    trace.sample_id = sample.id;
    trace.original_context = sample.context;
    std::string context = sample.context;

    std::vector<PositionedDistractor> distractors;
    if (cfg.steps_enabled.count(StepName::distractor)) {
        StepRecord record;
        Candidate base = generate_base_distractor(sample, editor, guide, cfg, record);
        trace.steps.push_back(record);
        distractors.push_back({base.edited_text, DistractorKind::base});
    } else {
        trace.steps.push_back(disabled_step(StepName::distractor));
    }

    if (cfg.steps_enabled.count(StepName::extend) && !distractors.empty()) {
        StepRecord record;
        auto extended = extend_distractor(distractors.front().text, sample, editor, record);
        trace.steps.push_back(record);
        for (auto& v : extended) distractors.push_back(std::move(v));
    } else {
        trace.steps.push_back(disabled_step(StepName::extend));
    }

    if (cfg.steps_enabled.count(StepName::position) && !distractors.empty()) {
        StepRecord record;
        PositionChoice choice = position_distractor(context, sample, distractors, guide, record);
        trace.steps.push_back(record);
        context = choice.context;
        trace.distractor_text = choice.distractor_text;
        trace.distractor_position = choice.position;
        trace.distractor_kind = choice.kind;
    } else {
        trace.steps.push_back(disabled_step(StepName::position));
        if (!distractors.empty()) trace.distractor_text = distractors.front().text;
    }

    if (cfg.steps_enabled.count(StepName::anchor)) {
        StepRecord record;
        context = edit_overlap_anchor(context, sample, editor, guide, cfg, record,
                                      &trace.anchor_distance_before, &trace.anchor_distance_after);
        trace.steps.push_back(record);
    } else {
        trace.steps.push_back(disabled_step(StepName::anchor));
    }

    if (cfg.steps_enabled.count(StepName::lexical)) {
        StepRecord record;
        context = reduce_lexical_overlap(context, sample, editor, guide, cfg, record,
                                         &trace.jaccard_before, &trace.jaccard_after);
        trace.steps.push_back(record);
    } else {
        trace.steps.push_back(disabled_step(StepName::lexical));
    }

    trace.final_context = context;
    if (!primary_gold(trace.final_context, sample.golds)) {
        throw SampleDiscarded("sample " + sample.id + ": edit lost the gold answer");
    }
    return trace;
}

std::string run_baseline(const MRCSample& sample, Backend& editor, int max_retries) {
    std::string context = sample.context;
    std::string extension =
        trim(editor.complete(prompts::baseline_extension_prompt(context), false).text);
    if (!extension.empty()) context += " " + extension;

    const std::string* gold = primary_gold(context, sample.golds);
    if (!gold) throw BaselineFailed("sample " + sample.id + ": no gold answer in context");
    AnswerSpan answer = locate_answer(context, *gold);
    Span sentence = answer_sentence(context, answer);
    std::string sentence_text =
        context.substr(sentence.char_start, sentence.char_end - sentence.char_start);

    const std::string prompt = prompts::baseline_rephrase_prompt(*gold, sentence_text);
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        std::string rewritten = trim(editor.complete(prompt, false).text);
        if (!rewritten.empty() && rewritten.find(*gold) != std::string::npos) {
            return context.substr(0, sentence.char_start) + rewritten +
                   context.substr(sentence.char_end);
        }
    }
    throw BaselineFailed("sample " + sample.id + ": rephrase kept losing the gold answer");
}

EditTrace run_ablation(const MRCSample& sample, AblationVariant variant,
                       const PipelineConfig& cfg, Backend& editor, Backend& guide) {
    PipelineConfig ablated = cfg;
    if (variant == AblationVariant::distractor_only) {
        ablated.steps_enabled = {StepName::distractor, StepName::position};
    } else {
        ablated.steps_enabled = {StepName::anchor, StepName::lexical};
    }
    return run_pipeline(sample, ablated, editor, guide);
}

}  // namespace qaedit
