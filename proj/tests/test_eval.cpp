#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "qaedit/errors.hpp"
#include "qaedit/eval.hpp"
#include "qaedit/mock_backend.hpp"

using namespace qaedit;
using nlohmann::json;

namespace {

std::vector<MRCSample> toy_samples() {
    return {
        {"q1", "It happened in 1913 exactly.", "When did it happen?", {"1913"}, "toy"},
        {"q2", "The sky looked blue that day.", "What color was the sky?", {"blue"}, "toy"},
        {"q3", "Seven ships sailed away.", "How many ships sailed?", {"seven"}, "toy"},
        {"q4", "The keep stood by the river.", "Where did the keep stand?",
         {"by the river"}, "toy"},
    };
}

MockBackend echo_reader() {
    return MockBackend::from_json_text(R"([
        {"pattern": "When did it happen", "regex": true, "text": "1913"},
        {"pattern": "What color was the sky", "regex": true, "text": "blue"},
        {"pattern": "How many ships sailed", "regex": true, "text": "seven"},
        {"pattern": "Where did the keep stand", "regex": true, "text": "by the river"}
    ])");
}

}  // namespace

TEST_CASE("evaluate with a gold-echo reader scores 100") {
    auto reader = echo_reader();
    auto run = evaluate(reader, "echo", toy_samples(), "toy", "natural");
    CHECK(run.report.n == 4);
    CHECK(run.report.mean_f1 == doctest::Approx(100.0));
    CHECK(run.report.mean_em == doctest::Approx(100.0));
    CHECK(run.report.mean_im == doctest::Approx(100.0));
    for (const auto& r : run.per_sample) CHECK_FALSE(r.backend_failed);
    CHECK(std::is_sorted(run.per_sample.begin(), run.per_sample.end(),
                         [](const auto& a, const auto& b) { return a.id < b.id; }));
}

TEST_CASE("evaluate scores one miss out of four as 75 IM") {
    auto reader = MockBackend::from_json_text(R"([
        {"pattern": "When did it happen", "regex": true, "text": "1912"},
        {"pattern": "What color was the sky", "regex": true, "text": "blue"},
        {"pattern": "How many ships sailed", "regex": true, "text": "seven"},
        {"pattern": "Where did the keep stand", "regex": true, "text": "by the river"}
    ])");
    auto run = evaluate(reader, "shaky", toy_samples(), "toy", "natural");
    CHECK(run.report.mean_im == doctest::Approx(75.0));
    CHECK(run.report.mean_em == doctest::Approx(75.0));
}

TEST_CASE("evaluate survives backend failures and scores them 0") {
    auto reader = MockBackend::from_json_text(R"([
        {"pattern": "When did it happen", "regex": true, "text": "1913"}
    ])");
    auto run = evaluate(reader, "partial", toy_samples(), "toy", "natural");
    CHECK(run.report.n == 4);
    CHECK(run.report.mean_im == doctest::Approx(25.0));
    int failed = 0;
    for (const auto& r : run.per_sample) {
        if (r.backend_failed) {
            ++failed;
            CHECK(r.scored.f1 == doctest::Approx(0.0));
        }
    }
    CHECK(failed == 3);
}

TEST_CASE("empty prediction scores 0 against non-empty gold") {
    auto reader = MockBackend::from_json_text(R"([
        {"pattern": "Extracted span:$", "regex": true, "text": ""}
    ])");
    auto samples = toy_samples();
    samples.resize(1);
    auto run = evaluate(reader, "mute", samples, "toy", "natural");
    CHECK(run.report.mean_f1 == doctest::Approx(0.0));
    CHECK(run.report.mean_im == doctest::Approx(0.0));
}

TEST_CASE("compare of a run against itself is all zeros") {
    auto reader = echo_reader();
    auto run = evaluate(reader, "echo", toy_samples(), "toy", "natural");
    auto same = run;
    same.variant = "edited";
    auto cmp = compare(run, same);
    CHECK(cmp.delta_f1 == doctest::Approx(0.0));
    CHECK(cmp.delta_em == doctest::Approx(0.0));
    CHECK(cmp.delta_im == doctest::Approx(0.0));
    CHECK(cmp.misled_ids.empty());
    CHECK(cmp.misled_rate == doctest::Approx(0.0));
}

TEST_CASE("compare flags samples that flip from correct to incorrect") {
    auto natural_reader = echo_reader();
    auto natural = evaluate(natural_reader, "r", toy_samples(), "toy", "natural");

    auto edited_reader = MockBackend::from_json_text(R"([
        {"pattern": "When did it happen", "regex": true, "text": "1998"},
        {"pattern": "What color was the sky", "regex": true, "text": "blue"},
        {"pattern": "How many ships sailed", "regex": true, "text": "seven"},
        {"pattern": "Where did the keep stand", "regex": true, "text": "by the river"}
    ])");
    auto edited = evaluate(edited_reader, "r", toy_samples(), "toy", "edited");

    auto cmp = compare(natural, edited);
    CHECK(cmp.delta_im == doctest::Approx(-25.0));
    REQUIRE(cmp.misled_ids.size() == 1);
    CHECK(cmp.misled_ids[0] == "q1");
    CHECK(cmp.misled_rate == doctest::Approx(25.0));
}

TEST_CASE("compare rejects runs over different samples") {
    auto reader = echo_reader();
    auto full = evaluate(reader, "r", toy_samples(), "toy", "natural");
    auto samples = toy_samples();
    samples.pop_back();
    auto reader2 = echo_reader();
    auto partial = evaluate(reader2, "r", samples, "toy", "edited");
    CHECK_THROWS_AS(compare(full, partial), IdMismatch);
}

namespace {

ShortcutQARecord record_for(const MRCSample& s, const std::string& distractor) {
    ShortcutQARecord r;
    r.sample = s;
    r.edited_context = distractor + " " + s.context;
    r.trace.sample_id = s.id;
    r.trace.original_context = s.context;
    r.trace.final_context = r.edited_context;
    r.trace.distractor_text = distractor;
    return r;
}

}  // namespace

TEST_CASE("controllability attributes wrong answers to the distractor") {
    auto samples = toy_samples();
    std::vector<ShortcutQARecord> records = {
        record_for(samples[0], "It nearly happened in 1998 instead."),
        record_for(samples[1], "The sea looked green that day."),
        record_for(samples[2], "Nine carts rolled away."),
        record_for(samples[3], "The tower stood by the lake."),
    };
    EvalRun run;
    run.reader_id = "r";
    run.dataset_id = "toy";
    run.variant = "edited";
    // q1: wrong, verbatim from the distractor.  q2: wrong via a
    // distractor-exclusive word.  q3: wrong but unrelated.  q4: correct.
    run.per_sample = {
        {"q1", "1998", score_answer("1998", samples[0].golds), false},
        {"q2", "a green glow", score_answer("a green glow", samples[1].golds), false},
        {"q3", "twelve", score_answer("twelve", samples[2].golds), false},
        {"q4", "by the river", score_answer("by the river", samples[3].golds), false},
    };
    run.report = aggregate("toy", "edited", {run.per_sample[0].scored, run.per_sample[1].scored,
                                             run.per_sample[2].scored, run.per_sample[3].scored});

    auto report = controllability(run, records);
    CHECK(report.n == 4);
    CHECK(report.n_incorrect == 3);
    CHECK(report.n_from_distractor == 2);
    CHECK(report.pct_incorrect == doctest::Approx(75.0));
    CHECK(report.pct_from_distractor == doctest::Approx(50.0));
    CHECK(report.pct_from_distractor_of_incorrect == doctest::Approx(100.0 * 2 / 3));
}

TEST_CASE("run json round-trip") {
    auto reader = echo_reader();
    auto run = evaluate(reader, "echo", toy_samples(), "toy", "natural");
    auto back = run_from_json(run_to_json(run));
    CHECK(run_to_json(back).dump() == run_to_json(run).dump());
}

TEST_CASE("render_report carries runs and comparisons in both forms") {
    auto natural_reader = echo_reader();
    auto natural = evaluate(natural_reader, "echo", toy_samples(), "toy", "natural");
    auto edited = natural;
    edited.variant = "edited";
    auto cmp = compare(natural, edited);

    auto report = render_report({natural, edited}, {cmp}, std::nullopt);
    CHECK(report.text.find("echo") != std::string::npos);
    CHECK(report.text.find("natural") != std::string::npos);
    CHECK(report.machine.at("runs").size() == 2);
    CHECK(report.machine.at("runs").at(0).at("im") == doctest::Approx(100.0));
    CHECK(report.machine.at("comparisons").size() == 1);
    CHECK(report.machine.at("comparisons").at(0).at("im_diff") == doctest::Approx(0.0));
}
