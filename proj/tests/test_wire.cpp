#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "qaedit/errors.hpp"
#include "qaedit/http_backend.hpp"

using namespace qaedit;
using nlohmann::json;

namespace {

constexpr const char* kKeyEnv = "QAEDIT_TEST_API_KEY";
constexpr const char* kKey = "sk-test-secret-123";

struct StubServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    std::atomic<int> hits{0};
    std::mutex mu;
    std::vector<json> requests;
    std::vector<std::string> auth_headers;

    explicit StubServer(std::function<void(int, httplib::Response&)> respond) {
        server.Post("/v1/completions", [this, respond](const httplib::Request& req,
                                                       httplib::Response& res) {
            int n = ++hits;
            {
                std::lock_guard<std::mutex> lock(mu);
                requests.push_back(json::parse(req.body));
                auth_headers.push_back(req.get_header_value("Authorization"));
            }
            respond(n, res);
        });
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~StubServer() {
        server.stop();
        thread.join();
    }

    EndpointConfig config() const {
        EndpointConfig cfg;
        cfg.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
        cfg.model_name = "stub-model";
        cfg.api_key_env = kKeyEnv;
        cfg.max_retries = 3;
        cfg.backoff_ms = 1;
        return cfg;
    }
};

void ok_completion(httplib::Response& res) {
    json body = {
        {"model", "stub-model"},
        {"choices",
         {{{"text", " 1913"},
           {"logprobs",
            {{"tokens", {" 19", "13", "."}},
             {"token_logprobs", {-0.105, -0.223, -0.693}}}}}}},
    };
    res.set_content(body.dump(), "application/json");
}

}  // namespace

TEST_CASE("http backend wire behavior") {
    setenv(kKeyEnv, kKey, 1);

    SUBCASE("happy path sends the expected request and parses logprobs") {
        StubServer stub([](int, httplib::Response& res) { ok_completion(res); });
        std::vector<std::string> logs;
        HttpBackend backend(stub.config(), [&](const std::string& m) { logs.push_back(m); });

        auto c = backend.complete("the prompt", true);
        CHECK(c.text == " 1913");
        REQUIRE(c.token_logprobs.size() == 3);
        CHECK(c.token_logprobs[0].token == " 19");
        CHECK(c.token_logprobs[1].logprob == doctest::Approx(-0.223));

        REQUIRE(stub.requests.size() == 1);
        const json& req = stub.requests[0];
        CHECK(req.at("model") == "stub-model");
        CHECK(req.at("prompt") == "the prompt");
        CHECK(req.at("logprobs") == 5);
        CHECK(req.contains("temperature"));
        CHECK(req.contains("max_tokens"));
        CHECK(stub.auth_headers[0] == std::string("Bearer ") + kKey);

        // The key reaches the wire but never the logs.
        CHECK(!logs.empty());
        for (const auto& line : logs) CHECK(line.find(kKey) == std::string::npos);
    }

    SUBCASE("logprobs omitted from the request when not wanted") {
        StubServer stub([](int, httplib::Response& res) { ok_completion(res); });
        HttpBackend backend(stub.config());
        backend.complete("p", false);
        CHECK_FALSE(stub.requests[0].contains("logprobs"));
    }

    SUBCASE("retries through 500 and 429 then succeeds") {
        StubServer stub([](int n, httplib::Response& res) {
            if (n == 1) {
                res.status = 500;
            } else if (n == 2) {
                res.status = 429;
            } else {
                ok_completion(res);
            }
        });
        std::vector<std::string> logs;
        HttpBackend backend(stub.config(), [&](const std::string& m) { logs.push_back(m); });
        auto c = backend.complete("p", true);
        CHECK(c.text == " 1913");
        CHECK(stub.hits == 3);
        for (const auto& line : logs) CHECK(line.find(kKey) == std::string::npos);
    }

    SUBCASE("gives up after max_retries exhausted") {
        StubServer stub([](int, httplib::Response& res) { res.status = 503; });
        HttpBackend backend(stub.config());
        CHECK_THROWS_AS(backend.complete("p", true), TransportError);
        CHECK(stub.hits == 4);  // initial try + 3 retries
    }

    SUBCASE("401 fails immediately with AuthError") {
        StubServer stub([](int, httplib::Response& res) { res.status = 401; });
        HttpBackend backend(stub.config());
        CHECK_THROWS_AS(backend.complete("p", true), AuthError);
        CHECK(stub.hits == 1);
    }

    SUBCASE("malformed body is a ProtocolError") {
        StubServer stub([](int, httplib::Response& res) {
            res.set_content("{\"choices\": \"nope\"}", "application/json");
        });
        HttpBackend backend(stub.config());
        CHECK_THROWS_AS(backend.complete("p", true), ProtocolError);
    }

    SUBCASE("missing key env var is an AuthError before any request") {
        StubServer stub([](int, httplib::Response& res) { ok_completion(res); });
        auto cfg = stub.config();
        cfg.api_key_env = "QAEDIT_TEST_NO_SUCH_KEY";
        unsetenv("QAEDIT_TEST_NO_SUCH_KEY");
        HttpBackend backend(cfg);
        CHECK_THROWS_AS(backend.complete("p", true), AuthError);
        CHECK(stub.hits == 0);
    }
}
