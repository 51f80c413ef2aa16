#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qaedit/backend.hpp"
#include "qaedit/dataset.hpp"
#include "qaedit/metrics.hpp"
#include "qaedit/sample.hpp"

namespace qaedit {

struct PerSampleResult {
    std::string id;
    std::string prediction;
    ScoredAnswer scored;
    bool backend_failed = false;
};

struct EvalRun {
    std::string reader_id;
    std::string dataset_id;
    std::string variant;  // "natural" or "edited"
    std::vector<PerSampleResult> per_sample;
    MetricsReport report;
};

struct Comparison {
    std::string dataset_id;
    std::string reader_id;
    double delta_f1 = 0.0;
    double delta_em = 0.0;
    double delta_im = 0.0;  // the IM Diff
    std::vector<std::string> misled_ids;
    double misled_rate = 0.0;  // percent of samples
    MetricsReport natural;
    MetricsReport edited;
};

struct ControllabilityReport {
    std::size_t n = 0;
    std::size_t n_incorrect = 0;
    std::size_t n_from_distractor = 0;
    double pct_incorrect = 0.0;        // of all samples
    double pct_from_distractor = 0.0;  // of all samples
    double pct_from_distractor_of_incorrect = 0.0;
};

/// Asks the reader the QA prompt per sample and aggregates F1/EM/IM.
/// Backend failures score 0 and are flagged; the run always completes.
/// Results are ordered by sample id.
EvalRun evaluate(Backend& reader, const std::string& reader_id,
                 const std::vector<MRCSample>& samples, const std::string& dataset_id,
                 const std::string& variant);

/// Per-metric deltas, the IM Diff, and per-sample misled flags.
/// Throws IdMismatch when the two runs cover different samples.
Comparison compare(const EvalRun& natural, const EvalRun& edited);

/// Among incorrect (IM = 0) answers, how many were drawn from the inserted
/// distractor: normalized-substring of the distractor, or sharing a word that
/// appears in the distractor but not in the original context.
ControllabilityReport controllability(const EvalRun& edited_run,
                                      const std::vector<ShortcutQARecord>& records);

struct Report {
    std::string text;
    nlohmann::json machine;
};

Report render_report(const std::vector<EvalRun>& runs, const std::vector<Comparison>& comparisons,
                     const std::optional<CorpusStats>& stats,
                     const std::optional<ControllabilityReport>& control = std::nullopt);

nlohmann::json run_to_json(const EvalRun& run);
EvalRun run_from_json(const nlohmann::json& j);

}  // namespace qaedit
