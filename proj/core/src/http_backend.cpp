#include "qaedit/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "qaedit/errors.hpp"

namespace qaedit {

using nlohmann::json;

HttpBackend::HttpBackend(EndpointConfig config, LogSink log)
    : config_(std::move(config)), log_(std::move(log)) {}

void HttpBackend::log(const std::string& message) {
    if (log_) log_(message);
}

Completion HttpBackend::complete(const std::string& prompt, bool want_logprobs) {
    const char* key = nullptr;
    if (!config_.api_key_env.empty()) {
        key = std::getenv(config_.api_key_env.c_str());
        if (!key) throw AuthError("api key env var not set: " + config_.api_key_env);
    }

    // Split an optional path prefix off the base url.
    std::string host = config_.base_url;
    std::string prefix;
    std::size_t scheme = host.find("://");
    std::size_t slash = host.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
        prefix = host.substr(slash);
        host = host.substr(0, slash);
    }
    const std::string path = prefix + "/completions";

    json body = {
        {"model", config_.model_name},
        {"prompt", prompt},
        {"temperature", config_.temperature},
        {"max_tokens", max_tokens_},
    };
    if (want_logprobs) body["logprobs"] = 5;

    httplib::Client client(host);
    client.set_connection_timeout(config_.timeout_s);
    client.set_read_timeout(config_.timeout_s);
    httplib::Headers headers;
    if (key) headers.emplace("Authorization", std::string("Bearer ") + key);

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            int delay = config_.backoff_ms << (attempt - 1);
            log("retry " + std::to_string(attempt) + " after " + std::to_string(delay) + "ms: " +
                last_error);
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        auto start = std::chrono::steady_clock::now();
        auto res = client.Post(path, headers, body.dump(), "application/json");
        auto elapsed = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();

        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        log("POST " + host + path + " model=" + config_.model_name +
            " status=" + std::to_string(res->status));
        if (res->status == 401 || res->status == 403) {
            throw AuthError("authentication rejected (status " + std::to_string(res->status) + ")");
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw ProtocolError("unexpected status " + std::to_string(res->status));
        }

        try {
            json reply = json::parse(res->body);
            const json& choice = reply.at("choices").at(0);
            Completion out;
            out.text = choice.at("text").get<std::string>();
            out.model_id = reply.value("model", config_.model_name);
            out.latency_ms = elapsed;
            if (want_logprobs && choice.contains("logprobs") && !choice["logprobs"].is_null()) {
                const json& lp = choice["logprobs"];
                const json& probs = lp.at("token_logprobs");
                const json* tokens = lp.contains("tokens") ? &lp["tokens"] : nullptr;
                for (std::size_t i = 0; i < probs.size(); ++i) {
                    if (probs[i].is_null()) continue;
                    std::string token =
                        tokens && i < tokens->size() ? (*tokens)[i].get<std::string>() : "";
                    out.token_logprobs.push_back({token, probs[i].get<double>()});
                }
            }
            return out;
        } catch (const json::exception& e) {
            throw ProtocolError(std::string("malformed completion response: ") + e.what());
        }
    }
    throw TransportError("completion request failed after " +
                         std::to_string(config_.max_retries + 1) + " attempts: " + last_error);
}

}  // namespace qaedit
