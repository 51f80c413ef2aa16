#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qaedit/backend.hpp"
#include "qaedit/sample.hpp"

namespace qaedit {

enum class StepName { distractor, extend, position, anchor, lexical };
enum class DistractorPosition { beginning, end };
enum class DistractorKind { base, extended_coref, extended_elaboration };

std::string to_string(StepName s);
std::string to_string(DistractorPosition p);
std::string to_string(DistractorKind k);

struct PipelineConfig {
    int candidates_per_step = 3;
    int lexical_overlap_attempts = 3;  // fixed repeat count for the lexical step
    int max_validator_retries = 3;
    std::set<StepName> steps_enabled = {StepName::distractor, StepName::extend,
                                        StepName::position, StepName::anchor,
                                        StepName::lexical};
};

struct ValidatorResult {
    std::string check;
    bool passed = false;
};

struct StepRecord {
    StepName step_name = StepName::distractor;
    std::vector<Candidate> candidates;
    int chosen_index = -1;  // -1 when skipped
    std::vector<ValidatorResult> validator_results;
    std::optional<std::string> skipped_reason;
};

struct EditTrace {
    std::string sample_id;
    std::string original_context;
    std::string final_context;
    std::string distractor_text;
    DistractorPosition distractor_position = DistractorPosition::end;
    DistractorKind distractor_kind = DistractorKind::base;
    std::size_t anchor_distance_before = 0;
    std::size_t anchor_distance_after = 0;
    double jaccard_before = 0.0;
    double jaccard_after = 0.0;
    std::vector<StepRecord> steps;
};

struct PositionedDistractor {
    std::string text;
    DistractorKind kind = DistractorKind::base;
};

/// Step 1: sample distractor candidates from the editor, reject any that
/// contain a gold answer, and keep the guide's most misleading choice.
/// Throws SampleDiscarded when every retry round fails validation.
Candidate generate_base_distractor(const MRCSample& sample, Backend& editor, Backend& guide,
                                   const PipelineConfig& cfg, StepRecord& record);

/// Step 2: the two deterministic distractor extensions (coreference rephrase
/// and follow-up elaboration); variants that leak a gold answer are dropped.
std::vector<PositionedDistractor> extend_distractor(const std::string& base,
                                                    const MRCSample& sample, Backend& editor,
                                                    StepRecord& record);

struct PositionChoice {
    std::string context;
    std::string distractor_text;
    DistractorPosition position = DistractorPosition::end;
    DistractorKind kind = DistractorKind::base;
};

/// Step 3: place every distractor variant at the beginning and the end of the
/// context and keep the guide's most misleading combination.
PositionChoice position_distractor(const std::string& context, const MRCSample& sample,
                                   const std::vector<PositionedDistractor>& distractors,
                                   Backend& guide, StepRecord& record);

/// Step 4: push the nearest question/context anchor word away from the
/// answer. Skips (recording a reason) when there is no anchor or no candidate
/// passes validation.
std::string edit_overlap_anchor(const std::string& context, const MRCSample& sample,
                                Backend& editor, Backend& guide, const PipelineConfig& cfg,
                                StepRecord& record, std::size_t* distance_before,
                                std::size_t* distance_after);

/// Step 5: rewrite the answer sentence to shed question vocabulary. Skips when
/// no attempt both preserves the answer and lowers the overlap.
std::string reduce_lexical_overlap(const std::string& context, const MRCSample& sample,
                                   Backend& editor, Backend& guide, const PipelineConfig& cfg,
                                   StepRecord& record, double* jaccard_before,
                                   double* jaccard_after);

/// The full five-step sequential edit. Throws SampleDiscarded when the base
/// distractor cannot be generated.
EditTrace run_pipeline(const MRCSample& sample, const PipelineConfig& cfg, Backend& editor,
                       Backend& guide);

/// Non-targeted control edit: append an extension, then rephrase the answer
/// sentence, with no shortcut instructions and no guide scoring.
std::string run_baseline(const MRCSample& sample, Backend& editor, int max_retries = 3);

enum class AblationVariant { distractor_only, answer_sentence_only };

EditTrace run_ablation(const MRCSample& sample, AblationVariant variant,
                       const PipelineConfig& cfg, Backend& editor, Backend& guide);

}  // namespace qaedit
