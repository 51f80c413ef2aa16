#include "qaedit/mock_backend.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qaedit/errors.hpp"

namespace qaedit {

using nlohmann::json;

MockBackend::MockBackend(const std::string& fixture_path) {
    std::ifstream in(fixture_path);
    if (!in) throw ParseError("cannot open mock fixture: " + fixture_path);
    std::stringstream buf;
    buf << in.rdbuf();
    load(buf.str(), fixture_path);
}

MockBackend MockBackend::from_json_text(const std::string& json_text) {
    MockBackend backend;
    backend.load(json_text, "<inline>");
    return backend;
}

void MockBackend::load(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError("mock fixture " + origin + ": " + e.what());
    }
    if (!doc.is_array()) throw ParseError("mock fixture " + origin + ": expected an array");

    auto parse_response = [](const json& j) {
        Response r;
        r.text = j.at("text").get<std::string>();
        if (j.contains("token_logprobs")) {
            for (const auto& pair : j.at("token_logprobs")) {
                r.token_logprobs.push_back(
                    {pair.at(0).get<std::string>(), pair.at(1).get<double>()});
            }
        }
        return r;
    };

    for (const auto& item : doc) {
        Entry entry;
        entry.pattern = item.at("pattern").get<std::string>();
        entry.is_regex = item.value("regex", false);
        if (entry.is_regex) entry.compiled = std::regex(entry.pattern);
        if (item.contains("responses")) {
            for (const auto& r : item.at("responses")) entry.responses.push_back(parse_response(r));
        } else {
            entry.responses.push_back(parse_response(item));
        }
        if (entry.responses.empty()) {
            throw ParseError("mock fixture " + origin + ": entry with no responses");
        }
        entries_.push_back(std::move(entry));
    }
}

Completion MockBackend::complete(const std::string& prompt, bool want_logprobs) {
    for (Entry& entry : entries_) {
        bool match = entry.is_regex ? std::regex_search(prompt, entry.compiled)
                                    : prompt == entry.pattern;
        if (!match) continue;
        const Response& r = entry.responses[entry.next % entry.responses.size()];
        ++entry.next;
        Completion c;
        c.text = r.text;
        if (want_logprobs) c.token_logprobs = r.token_logprobs;
        c.model_id = "mock";
        return c;
    }
    throw ProtocolError("mock backend: unregistered prompt: " +
                        prompt.substr(0, std::min<std::size_t>(prompt.size(), 120)));
}

}  // namespace qaedit
