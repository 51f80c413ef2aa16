#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qaedit {

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;  // always <= 0
};

struct Completion {
    std::string text;
    std::vector<TokenLogprob> token_logprobs;
    std::string model_id;
    double latency_ms = 0.0;
};

struct EndpointConfig {
    std::string base_url;
    std::string model_name;
    std::string api_key_env;
    double temperature = 0.0;
    int max_retries = 3;
    int timeout_s = 60;
    int backoff_ms = 250;
};

struct Candidate {
    std::string edited_text;
    std::string guide_answer;
    double confidence = 0.0;
    int delta = -1;  // +1 correct, -1 incorrect
    double misleading_score = 0.0;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual Completion complete(const std::string& prompt, bool want_logprobs) = 0;
};

/// Renders the QA prompt and asks the backend with logprobs enabled.
Completion answer_question(Backend& backend, const std::string& context,
                           const std::string& question);

/// Confidence over the first three produced tokens:
/// e^{tok1} + e^{tok2/2} + e^{tok3/4}, missing tokens contributing 0.
double confidence(const Completion& completion);

/// delta = +1 iff the guide's answer includes a gold (inclusion match);
/// misleading_score = -(delta * confidence), so higher means more misleading.
Candidate score_candidate(const std::string& edited_text, const std::string& guide_answer,
                          const std::vector<std::string>& golds, double conf);

/// Argmax of misleading_score; ties go to the lowest index.
const Candidate& select_most_misleading(const std::vector<Candidate>& candidates);
std::size_t select_most_misleading_index(const std::vector<Candidate>& candidates);

}  // namespace qaedit
