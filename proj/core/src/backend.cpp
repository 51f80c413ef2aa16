#include "qaedit/backend.hpp"

#include <cmath>
#include <stdexcept>

#include "qaedit/metrics.hpp"
#include "qaedit/prompts.hpp"

namespace qaedit {

Completion answer_question(Backend& backend, const std::string& context,
                           const std::string& question) {
    return backend.complete(prompts::question_answering_prompt(question, context), true);
}

double confidence(const Completion& completion) {
    double total = 0.0;
    const auto& lps = completion.token_logprobs;
    if (lps.size() > 0) total += std::exp(lps[0].logprob);
    if (lps.size() > 1) total += std::exp(lps[1].logprob / 2.0);
    if (lps.size() > 2) total += std::exp(lps[2].logprob / 4.0);
    return total;
}

Candidate score_candidate(const std::string& edited_text, const std::string& guide_answer,
                          const std::vector<std::string>& golds, double conf) {
    Candidate c;
    c.edited_text = edited_text;
    c.guide_answer = guide_answer;
    c.confidence = conf;
    c.delta = inclusion_match(guide_answer, golds) == 1 ? 1 : -1;
    c.misleading_score = -(c.delta * conf);
    return c;
}

std::size_t select_most_misleading_index(const std::vector<Candidate>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("select_most_misleading: empty list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].misleading_score > candidates[best].misleading_score) best = i;
    }
    return best;
}

const Candidate& select_most_misleading(const std::vector<Candidate>& candidates) {
    return candidates[select_most_misleading_index(candidates)];
}

}  // namespace qaedit
