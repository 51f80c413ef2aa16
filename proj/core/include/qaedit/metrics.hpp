#pragma once

#include <string>
#include <vector>

namespace qaedit {

struct ScoredAnswer {
    std::string prediction;
    std::vector<std::string> golds;
    double f1 = 0.0;
    int em = 0;
    int im = 0;
};

struct MetricsReport {
    std::string dataset_id;
    std::string variant;  // "natural" or "edited"
    double mean_f1 = 0.0;  // percentages
    double mean_em = 0.0;
    double mean_im = 0.0;
    std::size_t n = 0;
};

/// SQuAD-style normalization: case-fold, strip punctuation (keeping '&'),
/// drop the articles a/an/the, collapse whitespace.
std::string normalize(const std::string& text);

/// Max over golds of the token-bag F1 between normalized strings.
double f1(const std::string& prediction, const std::vector<std::string>& golds);

/// 1 iff the normalized prediction equals any normalized gold.
int exact_match(const std::string& prediction, const std::vector<std::string>& golds);

/// 1 iff any normalized gold is a contiguous substring of the normalized
/// prediction.
int inclusion_match(const std::string& prediction, const std::vector<std::string>& golds);

ScoredAnswer score_answer(const std::string& prediction, const std::vector<std::string>& golds);

MetricsReport aggregate(const std::string& dataset_id, const std::string& variant,
                        const std::vector<ScoredAnswer>& scored);

/// edited.mean_im - natural.mean_im; throws IdMismatch on different datasets.
double im_diff(const MetricsReport& natural, const MetricsReport& edited);

/// True iff the model was correct on the original sample and incorrect on the
/// edited one (inclusion match on both sides).
bool is_misled(const std::string& answer_original, const std::string& answer_edited,
               const std::vector<std::string>& gold_original,
               const std::vector<std::string>& gold_edited);

}  // namespace qaedit
