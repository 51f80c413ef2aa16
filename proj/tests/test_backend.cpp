#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qaedit/backend.hpp"
#include "qaedit/errors.hpp"
#include "qaedit/mock_backend.hpp"
#include "qaedit/prompts.hpp"

using namespace qaedit;

TEST_CASE("mock backend contract") {
    const std::string fixture = R"([
        {"pattern": "hello", "text": "world", "token_logprobs": [["wo", -0.1], ["rld", -0.2]]},
        {"pattern": "count.*", "regex": true,
         "responses": [{"text": "one"}, {"text": "two"}]}
    ])";
    auto mock = MockBackend::from_json_text(fixture);

    auto c = mock.complete("hello", true);
    CHECK(c.text == "world");
    REQUIRE(c.token_logprobs.size() == 2);
    CHECK(c.token_logprobs[0].logprob == doctest::Approx(-0.1));

    CHECK(mock.complete("hello", false).token_logprobs.empty());
    CHECK_THROWS_AS(mock.complete("unregistered", true), ProtocolError);

    // Round-robin responses cycle deterministically.
    CHECK(mock.complete("count this", false).text == "one");
    CHECK(mock.complete("count this", false).text == "two");
    CHECK(mock.complete("count this", false).text == "one");
}

TEST_CASE("mock backend is deterministic across instances") {
    const std::string fixture = R"([{"pattern": "p", "text": "fixed"}])";
    auto a = MockBackend::from_json_text(fixture);
    auto b = MockBackend::from_json_text(fixture);
    for (int i = 0; i < 5; ++i) {
        CHECK(a.complete("p", false).text == b.complete("p", false).text);
    }
}

TEST_CASE("confidence formula") {
    Completion all_certain;
    all_certain.text = "x";
    all_certain.token_logprobs = {{"a", 0.0}, {"b", 0.0}, {"c", 0.0}};
    CHECK(confidence(all_certain) == doctest::Approx(3.0));

    Completion quarter;
    quarter.text = "x";
    double lp = std::log(0.25);
    quarter.token_logprobs = {{"a", lp}, {"b", lp}, {"c", lp}};
    CHECK(confidence(quarter) == doctest::Approx(0.25 + 0.5 + std::pow(0.25, 0.25)));

    Completion single;
    single.text = "x";
    single.token_logprobs = {{"a", std::log(0.5)}};
    CHECK(confidence(single) == doctest::Approx(0.5));

    CHECK(confidence(Completion{}) == doctest::Approx(0.0));
}

TEST_CASE("confidence is monotone and bounded") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> lp(-8.0, 0.0);
    for (int trial = 0; trial < 200; ++trial) {
        Completion c;
        c.token_logprobs = {{"a", lp(rng)}, {"b", lp(rng)}, {"c", lp(rng)}};
        double base = confidence(c);
        CHECK(base >= 0.0);
        CHECK(base <= 3.0);
        for (std::size_t i = 0; i < 3; ++i) {
            Completion bumped = c;
            bumped.token_logprobs[i].logprob =
                std::min(0.0, bumped.token_logprobs[i].logprob + 0.5);
            CHECK(confidence(bumped) >= base);
        }
    }
}

TEST_CASE("score_candidate sign convention") {
    std::vector<std::string> golds = {"1913"};
    auto wrong = score_candidate("ctx", "1912", golds, 2.0);
    CHECK(wrong.delta == -1);
    CHECK(wrong.misleading_score == doctest::Approx(2.0));

    auto right = score_candidate("ctx", "1913", golds, 2.0);
    CHECK(right.delta == 1);
    CHECK(right.misleading_score == doctest::Approx(-2.0));

    // Among correct answers the low-confidence one is more misleading.
    auto shaky = score_candidate("a", "1913", golds, 0.3);
    auto solid = score_candidate("b", "1913", golds, 2.9);
    CHECK(shaky.misleading_score > solid.misleading_score);
}

TEST_CASE("select_most_misleading") {
    std::vector<Candidate> one = {score_candidate("a", "x", {"x"}, 1.0)};
    CHECK(select_most_misleading_index(one) == 0);

    std::vector<Candidate> three;
    three.push_back(score_candidate("a", "wrong", {"x"}, 1.0));   // +1.0
    three.push_back(score_candidate("b", "x", {"x"}, 0.5));       // -0.5
    three.push_back(score_candidate("c", "wrong", {"x"}, 2.0));   // +2.0
    CHECK(select_most_misleading_index(three) == 2);
    CHECK(select_most_misleading(three).edited_text == "c");

    std::vector<Candidate> tie;
    tie.push_back(score_candidate("first", "wrong", {"x"}, 1.5));
    tie.push_back(score_candidate("second", "wrong", {"x"}, 1.5));
    CHECK(select_most_misleading_index(tie) == 0);

    CHECK_THROWS_AS(select_most_misleading_index({}), std::invalid_argument);
}

TEST_CASE("selection is permutation-stable for distinct scores") {
    std::mt19937 rng(13);
    std::vector<Candidate> candidates;
    for (int i = 0; i < 6; ++i) {
        candidates.push_back(
            score_candidate("text" + std::to_string(i), i % 2 ? "x" : "wrong", {"x"},
                            0.25 * (i + 1)));
    }
    std::string expected = select_most_misleading(candidates).edited_text;
    for (int perm = 0; perm < 50; ++perm) {
        std::shuffle(candidates.begin(), candidates.end(), rng);
        CHECK(select_most_misleading(candidates).edited_text == expected);
    }
}

TEST_CASE("question answering prompt snapshot") {
    std::string expected =
        "Answer the question by copying only the answer word to word from the context. "
        "Extract the minimal span that answers the question.\n"
        "Question: When?\n"
        "Context: In 1913.\n"
        "Extracted span:";
    CHECK(prompts::question_answering_prompt("When?", "In 1913.") == expected);

    // Empty context still renders a well-formed prompt.
    auto empty = prompts::question_answering_prompt("When?", "");
    CHECK(empty.find("Context: \n") != std::string::npos);
}

TEST_CASE("answer_question routes through the QA prompt") {
    std::string fixture = R"([
        {"pattern": "Extracted span:$", "regex": true, "text": "1913"}
    ])";
    auto mock = MockBackend::from_json_text(fixture);
    auto c = answer_question(mock, "In 1913 it happened.", "When?");
    CHECK(c.text == "1913");
}

TEST_CASE("distractor reply parsing") {
    CHECK(prompts::extract_distractor("Almost detail: a -> b\nDistractor: The decoy.") ==
          "The decoy.");
    CHECK(prompts::extract_distractor("Distractor: one\nDistractor: two") == "two");
    CHECK(prompts::extract_distractor("  just text  ") == "just text");
}
