#pragma once

#include <regex>
#include <string>
#include <vector>

#include "qaedit/backend.hpp"

namespace qaedit {

/// Scripted backend driven by a fixture file. The fixture is a JSON array of
/// entries, matched in order against the incoming prompt:
///
///   {"pattern": "...", "regex": true, "text": "...",
///    "token_logprobs": [["tok", -0.1], ...]}
///
/// An entry may instead carry "responses": [...] which are served round-robin
/// per entry, so repeated candidate generation from one prompt can vary while
/// staying deterministic run to run. Non-regex patterns match exactly.
/// Prompts matching no entry raise ProtocolError.
class MockBackend : public Backend {
public:
    explicit MockBackend(const std::string& fixture_path);
    static MockBackend from_json_text(const std::string& json_text);

    Completion complete(const std::string& prompt, bool want_logprobs) override;

private:
    struct Response {
        std::string text;
        std::vector<TokenLogprob> token_logprobs;
    };
    struct Entry {
        std::string pattern;
        bool is_regex = false;
        std::regex compiled;
        std::vector<Response> responses;
        std::size_t next = 0;
    };

    MockBackend() = default;
    void load(const std::string& json_text, const std::string& origin);

    std::vector<Entry> entries_;
};

}  // namespace qaedit
