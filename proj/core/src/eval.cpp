#include "qaedit/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "qaedit/errors.hpp"
#include "qaedit/text.hpp"

namespace qaedit {

using nlohmann::json;

namespace {

std::set<std::string> word_set(const std::string& text) {
    std::set<std::string> words;
    for (const Token& t : tokenize(text).tokens) {
        if (!t.is_word) continue;
        std::string folded = to_lower(t.surface);
        if (!is_stopword(folded)) words.insert(std::move(folded));
    }
    return words;
}

std::string fmt1(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << v;
    return out.str();
}

}  // namespace

EvalRun evaluate(Backend& reader, const std::string& reader_id,
                 const std::vector<MRCSample>& samples, const std::string& dataset_id,
                 const std::string& variant) {
    EvalRun run;
    run.reader_id = reader_id;
    run.dataset_id = dataset_id;
    run.variant = variant;
    for (const MRCSample& sample : samples) {
        PerSampleResult result;
        result.id = sample.id;
        try {
            Completion reply = answer_question(reader, sample.context, sample.question);
            result.prediction = reply.text;
        } catch (const std::runtime_error&) {
            result.backend_failed = true;
        }
        result.scored = score_answer(result.prediction, sample.golds);
        if (result.backend_failed) {
            result.scored.f1 = 0.0;
            result.scored.em = 0;
            result.scored.im = 0;
        }
        run.per_sample.push_back(std::move(result));
    }
    std::sort(run.per_sample.begin(), run.per_sample.end(),
              [](const PerSampleResult& a, const PerSampleResult& b) { return a.id < b.id; });
    std::vector<ScoredAnswer> scored;
    for (const auto& r : run.per_sample) scored.push_back(r.scored);
    run.report = aggregate(dataset_id, variant, scored);
    return run;
}

Comparison compare(const EvalRun& natural, const EvalRun& edited) {
    if (natural.per_sample.size() != edited.per_sample.size()) {
        throw IdMismatch("runs cover different sample counts");
    }
    Comparison cmp;
    cmp.dataset_id = natural.dataset_id;
    cmp.reader_id = edited.reader_id;
    cmp.natural = natural.report;
    cmp.edited = edited.report;
    cmp.delta_f1 = edited.report.mean_f1 - natural.report.mean_f1;
    cmp.delta_em = edited.report.mean_em - natural.report.mean_em;
    cmp.delta_im = im_diff(natural.report, edited.report);

    for (std::size_t i = 0; i < natural.per_sample.size(); ++i) {
        const auto& nat = natural.per_sample[i];
        const auto& ed = edited.per_sample[i];
        if (nat.id != ed.id) throw IdMismatch("sample id mismatch: " + nat.id + " vs " + ed.id);
        if (is_misled(nat.prediction, ed.prediction, nat.scored.golds, ed.scored.golds)) {
            cmp.misled_ids.push_back(nat.id);
        }
    }
    if (!natural.per_sample.empty()) {
        cmp.misled_rate = 100.0 * cmp.misled_ids.size() / natural.per_sample.size();
    }
    return cmp;
}

ControllabilityReport controllability(const EvalRun& edited_run,
                                      const std::vector<ShortcutQARecord>& records) {
    std::map<std::string, const ShortcutQARecord*> by_id;
    for (const auto& r : records) by_id[r.sample.id] = &r;

    ControllabilityReport report;
    report.n = edited_run.per_sample.size();
    for (const auto& result : edited_run.per_sample) {
        if (result.scored.im != 0) continue;
        ++report.n_incorrect;
        auto it = by_id.find(result.id);
        if (it == by_id.end()) continue;
        const ShortcutQARecord& record = *it->second;
        if (record.trace.distractor_text.empty()) continue;

        std::string pred = normalize(result.prediction);
        std::string distractor = normalize(record.trace.distractor_text);
        bool from_distractor =
            !pred.empty() && distractor.find(pred) != std::string::npos;
        if (!from_distractor) {
            // Distractor-exclusive vocabulary: the changed "almost detail"
            // words live in the distractor but not the original context.
            std::set<std::string> exclusive = word_set(record.trace.distractor_text);
            for (const auto& w : word_set(record.sample.context)) exclusive.erase(w);
            for (const auto& w : word_set(result.prediction)) {
                if (exclusive.count(w)) {
                    from_distractor = true;
                    break;
                }
            }
        }
        if (from_distractor) ++report.n_from_distractor;
    }
    if (report.n) {
        report.pct_incorrect = 100.0 * report.n_incorrect / report.n;
        report.pct_from_distractor = 100.0 * report.n_from_distractor / report.n;
    }
    if (report.n_incorrect) {
        report.pct_from_distractor_of_incorrect =
            100.0 * report.n_from_distractor / report.n_incorrect;
    }
    return report;
}

Report render_report(const std::vector<EvalRun>& runs, const std::vector<Comparison>& comparisons,
                     const std::optional<CorpusStats>& stats,
                     const std::optional<ControllabilityReport>& control) {
    std::ostringstream out;
    json machine;
    machine["runs"] = json::array();
    machine["comparisons"] = json::array();

    out << std::left << std::setw(12) << "Reader" << std::setw(12) << "Dataset" << std::setw(9)
        << "Variant" << std::right << std::setw(7) << "F1" << std::setw(7) << "EM" << std::setw(7)
        << "IM" << std::setw(6) << "N" << "\n";
    for (const auto& run : runs) {
        out << std::left << std::setw(12) << run.reader_id << std::setw(12) << run.dataset_id
            << std::setw(9) << run.variant << std::right << std::setw(7) << fmt1(run.report.mean_f1)
            << std::setw(7) << fmt1(run.report.mean_em) << std::setw(7) << fmt1(run.report.mean_im)
            << std::setw(6) << run.report.n << "\n";
        machine["runs"].push_back({{"reader", run.reader_id},
                                   {"dataset", run.dataset_id},
                                   {"variant", run.variant},
                                   {"f1", run.report.mean_f1},
                                   {"em", run.report.mean_em},
                                   {"im", run.report.mean_im},
                                   {"n", run.report.n}});
    }

    for (const auto& cmp : comparisons) {
        out << "\n" << cmp.reader_id << " on " << cmp.dataset_id << ": IM Diff "
            << fmt1(cmp.delta_im) << " (F1 " << fmt1(cmp.delta_f1) << ", EM " << fmt1(cmp.delta_em)
            << "), misled " << cmp.misled_ids.size() << "/" << cmp.natural.n << " ("
            << fmt1(cmp.misled_rate) << "%)\n";
        machine["comparisons"].push_back({{"reader", cmp.reader_id},
                                          {"dataset", cmp.dataset_id},
                                          {"im_diff", cmp.delta_im},
                                          {"delta_f1", cmp.delta_f1},
                                          {"delta_em", cmp.delta_em},
                                          {"misled_rate", cmp.misled_rate},
                                          {"misled_ids", cmp.misled_ids}});
    }

    if (stats) {
        out << "\nDistractor position: beginning " << fmt1(stats->pct_distractor_beginning)
            << "%, end " << fmt1(stats->pct_distractor_end) << "%\n"
            << "Distractor length: base " << fmt1(stats->pct_base) << "%, extended "
            << fmt1(stats->pct_extended) << "%\n"
            << "Distance added (tokens): " << fmt1(stats->mean_distance_added) << "\n"
            << "Jaccard ratio (%): " << fmt1(stats->mean_jaccard_ratio) << "\n";
        machine["stats"] = {{"pct_distractor_beginning", stats->pct_distractor_beginning},
                            {"pct_distractor_end", stats->pct_distractor_end},
                            {"pct_base", stats->pct_base},
                            {"pct_extended", stats->pct_extended},
                            {"mean_distance_added", stats->mean_distance_added},
                            {"mean_jaccard_ratio", stats->mean_jaccard_ratio},
                            {"n", stats->n}};
    }

    if (control) {
        out << "\nIncorrect answers: " << control->n_incorrect << "/" << control->n << " ("
            << fmt1(control->pct_incorrect) << "%), from distractor: "
            << control->n_from_distractor << " (" << fmt1(control->pct_from_distractor)
            << "% of all, " << fmt1(control->pct_from_distractor_of_incorrect)
            << "% of incorrect)\n";
        machine["controllability"] = {
            {"n", control->n},
            {"n_incorrect", control->n_incorrect},
            {"n_from_distractor", control->n_from_distractor},
            {"pct_incorrect", control->pct_incorrect},
            {"pct_from_distractor", control->pct_from_distractor},
            {"pct_from_distractor_of_incorrect", control->pct_from_distractor_of_incorrect}};
    }

    return {out.str(), machine};
}

json run_to_json(const EvalRun& run) {
    json per_sample = json::array();
    for (const auto& r : run.per_sample) {
        per_sample.push_back({{"id", r.id},
                              {"prediction", r.prediction},
                              {"golds", r.scored.golds},
                              {"f1", r.scored.f1},
                              {"em", r.scored.em},
                              {"im", r.scored.im},
                              {"backend_failed", r.backend_failed}});
    }
    return {{"reader_id", run.reader_id},
            {"dataset_id", run.dataset_id},
            {"variant", run.variant},
            {"per_sample", per_sample},
            {"report",
             {{"mean_f1", run.report.mean_f1},
              {"mean_em", run.report.mean_em},
              {"mean_im", run.report.mean_im},
              {"n", run.report.n}}}};
}

EvalRun run_from_json(const json& j) {
    EvalRun run;
    run.reader_id = j.at("reader_id").get<std::string>();
    run.dataset_id = j.at("dataset_id").get<std::string>();
    run.variant = j.at("variant").get<std::string>();
    for (const auto& r : j.at("per_sample")) {
        PerSampleResult result;
        result.id = r.at("id").get<std::string>();
        result.prediction = r.at("prediction").get<std::string>();
        result.scored.prediction = result.prediction;
        result.scored.golds = r.at("golds").get<std::vector<std::string>>();
        result.scored.f1 = r.at("f1").get<double>();
        result.scored.em = r.at("em").get<int>();
        result.scored.im = r.at("im").get<int>();
        result.backend_failed = r.value("backend_failed", false);
        run.per_sample.push_back(std::move(result));
    }
    const json& rep = j.at("report");
    run.report.dataset_id = run.dataset_id;
    run.report.variant = run.variant;
    run.report.mean_f1 = rep.at("mean_f1").get<double>();
    run.report.mean_em = rep.at("mean_em").get<double>();
    run.report.mean_im = rep.at("mean_im").get<double>();
    run.report.n = rep.at("n").get<std::size_t>();
    return run;
}

}  // namespace qaedit
