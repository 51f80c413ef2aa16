#pragma once

#include <functional>
#include <string>

#include "qaedit/backend.hpp"

namespace qaedit {

using LogSink = std::function<void(const std::string&)>;

/// Completion-API client: POST {base_url}/completions with
/// {model, prompt, temperature, max_tokens, logprobs: 5}, reading
/// choices[0].text and choices[0].logprobs.token_logprobs.
///
/// Transient failures (transport errors, 5xx, 429) retry with exponential
/// backoff up to max_retries. The API key is read from the environment
/// variable named by the config and never appears in log output.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(EndpointConfig config, LogSink log = nullptr);

    Completion complete(const std::string& prompt, bool want_logprobs) override;

    const EndpointConfig& config() const { return config_; }

private:
    void log(const std::string& message);

    EndpointConfig config_;
    LogSink log_;
    int max_tokens_ = 64;
};

}  // namespace qaedit
