#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qaedit/pipeline.hpp"
#include "qaedit/sample.hpp"

namespace qaedit {

enum class ReviewState { pending, accepted, discarded };
std::string to_string(ReviewState s);
ReviewState review_state_from_string(const std::string& s);

struct ShortcutQARecord {
    MRCSample sample;
    std::string edited_context;
    EditTrace trace;
    ReviewState review = ReviewState::pending;
    std::optional<std::string> review_note;
    // Unknown top-level fields from older/newer writers, preserved on rewrite.
    nlohmann::json extra = nlohmann::json::object();
};

struct CorpusStats {
    double pct_distractor_beginning = 0.0;
    double pct_distractor_end = 0.0;
    double pct_base = 0.0;
    double pct_extended = 0.0;
    double mean_distance_added = 0.0;  // tokens
    double mean_jaccard_ratio = 0.0;   // percentage, after/before * 100
    std::size_t n = 0;
};

/// SQuAD-v1 shaped file: data[].paragraphs[].{context, qas[].{id, question,
/// answers[].{text, answer_start}}}. Samples whose golds never occur verbatim
/// in the context are dropped; the warn callback reports them and any
/// answer_start/verbatim-search disagreements.
std::vector<MRCSample> load_squad(const std::string& path,
                                  const std::function<void(const std::string&)>& warn = nullptr);

/// One JSON object per line with fields id, context, question, answers.
std::vector<MRCSample> load_jsonl(const std::string& path,
                                  const std::function<void(const std::string&)>& warn = nullptr);

// Line-delimited record files, schema_version "1". read o write = identity.
void write_records(const std::vector<ShortcutQARecord>& records, const std::string& path);
std::vector<ShortcutQARecord> read_records(const std::string& path);

nlohmann::json record_to_json(const ShortcutQARecord& record);
ShortcutQARecord record_from_json(const nlohmann::json& j);

struct ReviewDecision {
    std::string id;
    bool accept = false;
    std::string note;
};

struct ReviewSummary {
    std::size_t total = 0;
    std::size_t accepted = 0;
    std::size_t discarded = 0;
};

/// Applies accept/discard decisions and returns the accepted records only.
/// Throws UnknownId for a decision naming no record.
std::vector<ShortcutQARecord> review_pass(std::vector<ShortcutQARecord>& records,
                                          const std::vector<ReviewDecision>& decisions,
                                          ReviewSummary* summary = nullptr);

/// Journal file, one decision per line: id <TAB> accept|discard [<TAB> note]
std::vector<ReviewDecision> load_review_journal(const std::string& path);

/// Position/kind distributions over chosen distractors, mean anchor distance
/// added, and the mean after/before Jaccard ratio in percent (records with
/// a zero before-score are excluded from the ratio).
CorpusStats corpus_stats(const std::vector<ShortcutQARecord>& records);

}  // namespace qaedit
