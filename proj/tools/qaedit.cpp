// Command-line front end: edit, baseline, ablate, evaluate, compare, stats,
// review. See README.md for usage.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qaedit/dataset.hpp"
#include "qaedit/errors.hpp"
#include "qaedit/eval.hpp"
#include "qaedit/http_backend.hpp"
#include "qaedit/mock_backend.hpp"
#include "qaedit/pipeline.hpp"

using namespace qaedit;
using nlohmann::json;

namespace {

void warn(const std::string& message) { std::cerr << "warning: " << message << "\n"; }

std::vector<MRCSample> load_dataset(const std::string& path, const std::string& format) {
    if (format == "squad") return load_squad(path, warn);
    if (format == "jsonl") return load_jsonl(path, warn);
    if (format == "records") {
        std::vector<MRCSample> samples;
        for (const auto& r : read_records(path)) samples.push_back(r.sample);
        return samples;
    }
    throw ParseError("unknown dataset format: " + format);
}

EndpointConfig endpoint_from_json(const json& j) {
    EndpointConfig cfg;
    cfg.base_url = j.at("base_url").get<std::string>();
    cfg.model_name = j.value("model_name", "");
    cfg.api_key_env = j.value("api_key_env", "");
    cfg.temperature = j.value("temperature", 0.0);
    cfg.max_retries = j.value("max_retries", 3);
    cfg.timeout_s = j.value("timeout_s", 60);
    cfg.backoff_ms = j.value("backoff_ms", 250);
    return cfg;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config: " + path);
    return json::parse(in);
}

struct Backends {
    std::unique_ptr<Backend> editor;
    std::unique_ptr<Backend> guide;
};

// With --mock a single scripted backend serves both roles; the fixture's
// patterns distinguish editor and guide prompts.
Backends make_edit_backends(const std::string& mock_path, const std::string& config_path) {
    Backends b;
    if (!mock_path.empty()) {
        auto shared = std::make_shared<MockBackend>(mock_path);
        struct Shared : Backend {
            std::shared_ptr<MockBackend> inner;
            explicit Shared(std::shared_ptr<MockBackend> m) : inner(std::move(m)) {}
            Completion complete(const std::string& p, bool lp) override {
                return inner->complete(p, lp);
            }
        };
        b.editor = std::make_unique<Shared>(shared);
        b.guide = std::make_unique<Shared>(shared);
        return b;
    }
    json cfg = load_config(config_path);
    b.editor = std::make_unique<HttpBackend>(endpoint_from_json(cfg.at("editor")));
    b.guide = std::make_unique<HttpBackend>(endpoint_from_json(cfg.at("guide")));
    return b;
}

std::unique_ptr<Backend> make_reader_backend(const std::string& reader,
                                             const std::string& mock_path,
                                             const std::string& config_path) {
    if (!mock_path.empty()) return std::make_unique<MockBackend>(mock_path);
    json cfg = load_config(config_path);
    const json& readers = cfg.at("readers");
    if (!readers.contains(reader)) throw ParseError("reader not in config: " + reader);
    return std::make_unique<HttpBackend>(endpoint_from_json(readers.at(reader)));
}

int run_edits(const std::string& dataset_path, const std::string& format,
              const std::string& mock_path, const std::string& config_path,
              const std::string& out_path, const PipelineConfig& cfg,
              std::optional<AblationVariant> ablation) {
    auto samples = load_dataset(dataset_path, format);
    std::sort(samples.begin(), samples.end(),
              [](const MRCSample& a, const MRCSample& b) { return a.id < b.id; });
    Backends backends = make_edit_backends(mock_path, config_path);

    std::vector<ShortcutQARecord> records;
    std::size_t discarded = 0;
    for (const MRCSample& sample : samples) {
        try {
            EditTrace trace = ablation
                                  ? run_ablation(sample, *ablation, cfg, *backends.editor,
                                                 *backends.guide)
                                  : run_pipeline(sample, cfg, *backends.editor, *backends.guide);
            ShortcutQARecord record;
            record.sample = sample;
            record.edited_context = trace.final_context;
            record.trace = std::move(trace);
            records.push_back(std::move(record));
        } catch (const SampleDiscarded& e) {
            std::cerr << "discarded: " << e.what() << "\n";
            ++discarded;
        }
    }
    write_records(records, out_path);
    std::cout << "edited " << records.size() << " sample(s), discarded " << discarded << " -> "
              << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adversarial shortcut-trigger editing and evaluation for MRC datasets"};
    app.require_subcommand(1);

    std::string dataset_path, format = "squad", mock_path, config_path, out_path;
    std::string records_path, journal_path, reader = "reader", variant = "natural";
    std::string natural_path, edited_path, ablation_name;
    int candidates = 3;
    unsigned seed = 0;
    bool interactive = false;

    auto add_backend_opts = [&](CLI::App* cmd) {
        cmd->add_option("--mock", mock_path, "Scripted backend fixture file (no network)");
        cmd->add_option("--config", config_path, "Endpoint configuration file");
    };

    auto* edit = app.add_subcommand("edit", "Run the five-step adversarial editor");
    edit->add_option("--dataset", dataset_path, "Input dataset")->required();
    edit->add_option("--format", format, "squad|jsonl|records");
    edit->add_option("--out", out_path, "Output records file")->required();
    edit->add_option("--candidates", candidates, "Edit candidates per step");
    edit->add_option("--seed", seed, "Reserved for sampling jitter; mocks are deterministic");
    add_backend_opts(edit);

    auto* baseline = app.add_subcommand("baseline", "Non-targeted control edits");
    baseline->add_option("--dataset", dataset_path, "Input dataset")->required();
    baseline->add_option("--format", format, "squad|jsonl|records");
    baseline->add_option("--out", out_path, "Output records file")->required();
    add_backend_opts(baseline);

    auto* ablate = app.add_subcommand("ablate", "Single-family edit variants");
    ablate->add_option("--variant", ablation_name, "distractor_only|answer_sentence_only")
        ->required();
    ablate->add_option("--dataset", dataset_path, "Input dataset")->required();
    ablate->add_option("--format", format, "squad|jsonl|records");
    ablate->add_option("--out", out_path, "Output records file")->required();
    ablate->add_option("--candidates", candidates, "Edit candidates per step");
    add_backend_opts(ablate);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a reader on a dataset");
    evaluate_cmd->add_option("--reader", reader, "Reader name (from config) or label");
    evaluate_cmd->add_option("--dataset", dataset_path, "Dataset or records file")->required();
    evaluate_cmd->add_option("--format", format, "squad|jsonl|records");
    evaluate_cmd->add_option("--variant", variant, "natural|edited");
    evaluate_cmd->add_option("--out", out_path, "Output run file (JSON)")->required();
    add_backend_opts(evaluate_cmd);

    auto* compare_cmd = app.add_subcommand("compare", "Natural-vs-edited deltas and misled rate");
    compare_cmd->add_option("--natural", natural_path, "Natural run file")->required();
    compare_cmd->add_option("--edited", edited_path, "Edited run file")->required();
    compare_cmd->add_option("--records", records_path, "Records file for controllability");
    compare_cmd->add_option("--out", out_path, "Machine-readable report file");

    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics over edit traces");
    stats_cmd->add_option("--records", records_path, "Records file")->required();
    stats_cmd->add_option("--out", out_path, "Machine-readable report file");

    auto* review_cmd = app.add_subcommand("review", "Accept/discard pass over edited records");
    review_cmd->add_option("--records", records_path, "Records file")->required();
    review_cmd->add_option("--journal", journal_path, "Decision journal (tab-separated)")
        ->required();
    review_cmd->add_option("--out", out_path, "Curated output (accepted records only)")
        ->required();
    review_cmd->add_flag("--interactive", interactive,
                         "Prompt for decisions on records the journal does not cover");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(edit) || app.got_subcommand(ablate)) {
            PipelineConfig cfg;
            cfg.candidates_per_step = candidates;
            std::optional<AblationVariant> ab;
            if (app.got_subcommand(ablate)) {
                if (ablation_name == "distractor_only") {
                    ab = AblationVariant::distractor_only;
                } else if (ablation_name == "answer_sentence_only") {
                    ab = AblationVariant::answer_sentence_only;
                } else {
                    std::cerr << "unknown ablation variant: " << ablation_name << "\n";
                    return 2;
                }
            }
            return run_edits(dataset_path, format, mock_path, config_path, out_path, cfg, ab);
        }

        if (app.got_subcommand(baseline)) {
            auto samples = load_dataset(dataset_path, format);
            Backends backends = make_edit_backends(mock_path, config_path);
            std::vector<ShortcutQARecord> records;
            std::size_t failed = 0;
            for (const MRCSample& sample : samples) {
                try {
                    ShortcutQARecord record;
                    record.sample = sample;
                    record.edited_context = run_baseline(sample, *backends.editor);
                    record.trace.sample_id = sample.id;
                    record.trace.original_context = sample.context;
                    record.trace.final_context = record.edited_context;
                    records.push_back(std::move(record));
                } catch (const BaselineFailed& e) {
                    std::cerr << "failed: " << e.what() << "\n";
                    ++failed;
                }
            }
            write_records(records, out_path);
            std::cout << "baseline-edited " << records.size() << " sample(s), failed " << failed
                      << " -> " << out_path << "\n";
            return 0;
        }

        if (app.got_subcommand(evaluate_cmd)) {
            std::vector<MRCSample> samples;
            if (variant == "edited") {
                for (const auto& r : read_records(dataset_path)) {
                    MRCSample s = r.sample;
                    s.context = r.edited_context;
                    samples.push_back(std::move(s));
                }
            } else {
                samples = load_dataset(dataset_path, format);
            }
            auto backend = make_reader_backend(reader, mock_path, config_path);
            EvalRun run = evaluate(*backend, reader, samples, dataset_path, variant);
            std::ofstream out(out_path);
            out << run_to_json(run).dump(2) << "\n";
            std::cout << render_report({run}, {}, std::nullopt).text;
            return 0;
        }

        if (app.got_subcommand(compare_cmd)) {
            auto load_run = [](const std::string& path) {
                std::ifstream in(path);
                if (!in) throw ParseError("cannot open run file: " + path);
                return run_from_json(json::parse(in));
            };
            EvalRun natural = load_run(natural_path);
            EvalRun edited = load_run(edited_path);
            Comparison cmp = compare(natural, edited);
            std::optional<ControllabilityReport> control;
            if (!records_path.empty()) {
                control = controllability(edited, read_records(records_path));
            }
            Report report = render_report({natural, edited}, {cmp}, std::nullopt, control);
            std::cout << report.text;
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                out << report.machine.dump(2) << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(stats_cmd)) {
            CorpusStats stats = corpus_stats(read_records(records_path));
            Report report = render_report({}, {}, stats);
            std::cout << report.text;
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                out << report.machine.dump(2) << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(review_cmd)) {
            auto records = read_records(records_path);
            auto decisions = load_review_journal(journal_path);
            if (interactive) {
                std::set<std::string> decided;
                for (const auto& d : decisions) decided.insert(d.id);
                std::ofstream journal(journal_path, std::ios::app);
                for (const auto& r : records) {
                    if (decided.count(r.sample.id)) continue;
                    std::cout << "--- " << r.sample.id << "\nQ: " << r.sample.question
                              << "\nBEFORE: " << r.sample.context
                              << "\nAFTER:  " << r.edited_context << "\naccept? [y/n] "
                              << std::flush;
                    std::string reply;
                    if (!std::getline(std::cin, reply)) break;
                    bool accept = !reply.empty() && (reply[0] == 'y' || reply[0] == 'Y');
                    decisions.push_back({r.sample.id, accept, ""});
                    journal << r.sample.id << "\t" << (accept ? "accept" : "discard") << "\n";
                }
            }
            ReviewSummary summary;
            auto curated = review_pass(records, decisions, &summary);
            write_records(curated, out_path);
            double discard_rate =
                summary.total ? 100.0 * summary.discarded / summary.total : 0.0;
            std::cout << "reviewed " << summary.total << ": accepted " << summary.accepted
                      << ", discarded " << summary.discarded << " (" << std::fixed
                      << std::setprecision(1) << discard_rate << "% discard rate) -> " << out_path
                      << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
