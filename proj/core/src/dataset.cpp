#include "qaedit/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "qaedit/errors.hpp"

namespace qaedit {

using nlohmann::json;

namespace {

StepName step_name_from_string(const std::string& s) {
    if (s == "distractor") return StepName::distractor;
    if (s == "extend") return StepName::extend;
    if (s == "position") return StepName::position;
    if (s == "anchor") return StepName::anchor;
    if (s == "lexical") return StepName::lexical;
    throw ParseError("unknown step name: " + s);
}

DistractorPosition position_from_string(const std::string& s) {
    if (s == "beginning") return DistractorPosition::beginning;
    if (s == "end") return DistractorPosition::end;
    throw ParseError("unknown distractor position: " + s);
}

DistractorKind kind_from_string(const std::string& s) {
    if (s == "base") return DistractorKind::base;
    if (s == "extended_coref") return DistractorKind::extended_coref;
    if (s == "extended_elaboration") return DistractorKind::extended_elaboration;
    throw ParseError("unknown distractor kind: " + s);
}

json candidate_to_json(const Candidate& c) {
    return {{"edited_text", c.edited_text},
            {"guide_answer", c.guide_answer},
            {"confidence", c.confidence},
            {"delta", c.delta},
            {"misleading_score", c.misleading_score}};
}

Candidate candidate_from_json(const json& j) {
    Candidate c;
    c.edited_text = j.at("edited_text").get<std::string>();
    c.guide_answer = j.at("guide_answer").get<std::string>();
    c.confidence = j.at("confidence").get<double>();
    c.delta = j.at("delta").get<int>();
    c.misleading_score = j.at("misleading_score").get<double>();
    return c;
}

json step_to_json(const StepRecord& s) {
    json candidates = json::array();
    for (const auto& c : s.candidates) candidates.push_back(candidate_to_json(c));
    json validators = json::array();
    for (const auto& v : s.validator_results) {
        validators.push_back({{"check", v.check}, {"passed", v.passed}});
    }
    json out = {{"step", to_string(s.step_name)},
                {"candidates", candidates},
                {"chosen_index", s.chosen_index},
                {"validators", validators}};
    out["skipped_reason"] = s.skipped_reason ? json(*s.skipped_reason) : json(nullptr);
    return out;
}

StepRecord step_from_json(const json& j) {
    StepRecord s;
    s.step_name = step_name_from_string(j.at("step").get<std::string>());
    for (const auto& c : j.at("candidates")) s.candidates.push_back(candidate_from_json(c));
    s.chosen_index = j.at("chosen_index").get<int>();
    for (const auto& v : j.at("validators")) {
        s.validator_results.push_back(
            {v.at("check").get<std::string>(), v.at("passed").get<bool>()});
    }
    if (j.contains("skipped_reason") && !j["skipped_reason"].is_null()) {
        s.skipped_reason = j["skipped_reason"].get<std::string>();
    }
    return s;
}

json trace_to_json(const EditTrace& t) {
    json steps = json::array();
    for (const auto& s : t.steps) steps.push_back(step_to_json(s));
    return {{"sample_id", t.sample_id},
            {"original_context", t.original_context},
            {"final_context", t.final_context},
            {"distractor_text", t.distractor_text},
            {"distractor_position", to_string(t.distractor_position)},
            {"distractor_kind", to_string(t.distractor_kind)},
            {"anchor_distance_before", t.anchor_distance_before},
            {"anchor_distance_after", t.anchor_distance_after},
            {"jaccard_before", t.jaccard_before},
            {"jaccard_after", t.jaccard_after},
            {"steps", steps}};
}

EditTrace trace_from_json(const json& j) {
    EditTrace t;
    t.sample_id = j.at("sample_id").get<std::string>();
    t.original_context = j.at("original_context").get<std::string>();
    t.final_context = j.at("final_context").get<std::string>();
    t.distractor_text = j.at("distractor_text").get<std::string>();
    t.distractor_position = position_from_string(j.at("distractor_position").get<std::string>());
    t.distractor_kind = kind_from_string(j.at("distractor_kind").get<std::string>());
    t.anchor_distance_before = j.at("anchor_distance_before").get<std::size_t>();
    t.anchor_distance_after = j.at("anchor_distance_after").get<std::size_t>();
    t.jaccard_before = j.at("jaccard_before").get<double>();
    t.jaccard_after = j.at("jaccard_after").get<double>();
    for (const auto& s : j.at("steps")) t.steps.push_back(step_from_json(s));
    return t;
}

json sample_to_json(const MRCSample& s) {
    return {{"id", s.id},
            {"context", s.context},
            {"question", s.question},
            {"golds", s.golds},
            {"source", s.source}};
}

MRCSample sample_from_json(const json& j) {
    MRCSample s;
    s.id = j.at("id").get<std::string>();
    s.context = j.at("context").get<std::string>();
    s.question = j.at("question").get<std::string>();
    s.golds = j.at("golds").get<std::vector<std::string>>();
    s.source = j.value("source", "other");
    return s;
}

const char* const kKnownRecordKeys[] = {"schema_version", "sample",     "edited_context",
                                        "trace",          "review",     "review_note"};

bool gold_in_context(const MRCSample& s) {
    return std::any_of(s.golds.begin(), s.golds.end(), [&](const std::string& g) {
        return !g.empty() && s.context.find(g) != std::string::npos;
    });
}

void dedup_golds(std::vector<std::string>& golds) {
    std::vector<std::string> out;
    for (auto& g : golds) {
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
    }
    golds = std::move(out);
}

}  // namespace

std::string to_string(ReviewState s) {
    switch (s) {
        case ReviewState::pending: return "pending";
        case ReviewState::accepted: return "accepted";
        case ReviewState::discarded: return "discarded";
    }
    return "?";
}

ReviewState review_state_from_string(const std::string& s) {
    if (s == "pending") return ReviewState::pending;
    if (s == "accepted") return ReviewState::accepted;
    if (s == "discarded") return ReviewState::discarded;
    throw ParseError("unknown review state: " + s);
}

std::vector<MRCSample> load_squad(const std::string& path,
                                  const std::function<void(const std::string&)>& warn) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }

    std::vector<MRCSample> samples;
    try {
        for (const auto& article : doc.at("data")) {
            for (const auto& paragraph : article.at("paragraphs")) {
                std::string context = paragraph.at("context").get<std::string>();
                for (const auto& qa : paragraph.at("qas")) {
                    MRCSample s;
                    s.id = qa.at("id").is_string() ? qa["id"].get<std::string>()
                                                   : qa["id"].dump();
                    s.context = context;
                    s.question = qa.at("question").get<std::string>();
                    s.source = "squad";
                    for (const auto& ans : qa.at("answers")) {
                        std::string text = ans.at("text").get<std::string>();
                        if (ans.contains("answer_start") && warn) {
                            auto start = ans["answer_start"].get<long long>();
                            std::size_t found = context.find(text);
                            if (found != std::string::npos &&
                                static_cast<long long>(found) != start &&
                                context.find(text, start) != start) {
                                warn(s.id + ": answer_start disagrees with verbatim search, "
                                            "offset ignored");
                            }
                        }
                        s.golds.push_back(std::move(text));
                    }
                    dedup_golds(s.golds);
                    if (s.golds.empty() || !gold_in_context(s)) {
                        if (warn) warn(s.id + ": no gold answer occurs in context, dropped");
                        continue;
                    }
                    samples.push_back(std::move(s));
                }
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return samples;
}

std::vector<MRCSample> load_jsonl(const std::string& path,
                                  const std::function<void(const std::string&)>& warn) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<MRCSample> samples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
            MRCSample s;
            s.id = j.at("id").get<std::string>();
            s.context = j.at("context").get<std::string>();
            s.question = j.at("question").get<std::string>();
            s.golds = j.at("answers").get<std::vector<std::string>>();
            s.source = j.value("source", "other");
            dedup_golds(s.golds);
            if (s.golds.empty() || !gold_in_context(s)) {
                if (warn) warn(s.id + ": no gold answer occurs in context, dropped");
                continue;
            }
            samples.push_back(std::move(s));
        } catch (const json::exception& e) {
            throw ParseError(path + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return samples;
}

json record_to_json(const ShortcutQARecord& record) {
    json out = record.extra;
    out["schema_version"] = "1";
    out["sample"] = sample_to_json(record.sample);
    out["edited_context"] = record.edited_context;
    out["trace"] = trace_to_json(record.trace);
    out["review"] = to_string(record.review);
    out["review_note"] = record.review_note ? json(*record.review_note) : json(nullptr);
    return out;
}

ShortcutQARecord record_from_json(const json& j) {
    ShortcutQARecord r;
    r.sample = sample_from_json(j.at("sample"));
    r.edited_context = j.at("edited_context").get<std::string>();
    r.trace = trace_from_json(j.at("trace"));
    r.review = review_state_from_string(j.value("review", "pending"));
    if (j.contains("review_note") && !j["review_note"].is_null()) {
        r.review_note = j["review_note"].get<std::string>();
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = std::any_of(std::begin(kKnownRecordKeys), std::end(kKnownRecordKeys),
                                 [&](const char* k) { return it.key() == k; });
        if (!known) r.extra[it.key()] = it.value();
    }
    return r;
}

void write_records(const std::vector<ShortcutQARecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    for (const auto& r : records) out << record_to_json(r).dump() << "\n";
    if (!out) throw ParseError("write failed: " + path);
}

std::vector<ShortcutQARecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<ShortcutQARecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            records.push_back(record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ParseError(path + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return records;
}

std::vector<ShortcutQARecord> review_pass(std::vector<ShortcutQARecord>& records,
                                          const std::vector<ReviewDecision>& decisions,
                                          ReviewSummary* summary) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < records.size(); ++i) index[records[i].sample.id] = i;
    for (const auto& d : decisions) {
        auto it = index.find(d.id);
        if (it == index.end()) throw UnknownId(d.id);
        ShortcutQARecord& r = records[it->second];
        r.review = d.accept ? ReviewState::accepted : ReviewState::discarded;
        if (!d.note.empty()) r.review_note = d.note;
    }
    std::vector<ShortcutQARecord> curated;
    ReviewSummary s;
    s.total = records.size();
    for (const auto& r : records) {
        if (r.review == ReviewState::accepted) {
            curated.push_back(r);
            ++s.accepted;
        } else if (r.review == ReviewState::discarded) {
            ++s.discarded;
        }
    }
    if (summary) *summary = s;
    return curated;
}

std::vector<ReviewDecision> load_review_journal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open review journal: " + path);
    std::vector<ReviewDecision> decisions;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        ReviewDecision d;
        std::string verdict;
        if (!std::getline(fields, d.id, '\t') || !std::getline(fields, verdict, '\t')) {
            throw ParseError(path + " line " + std::to_string(lineno) +
                             ": expected id<TAB>accept|discard");
        }
        std::getline(fields, d.note, '\t');
        if (verdict == "accept") {
            d.accept = true;
        } else if (verdict == "discard") {
            d.accept = false;
        } else {
            throw ParseError(path + " line " + std::to_string(lineno) + ": bad verdict " + verdict);
        }
        decisions.push_back(std::move(d));
    }
    return decisions;
}

CorpusStats corpus_stats(const std::vector<ShortcutQARecord>& records) {
    CorpusStats stats;
    stats.n = records.size();
    if (records.empty()) return stats;

    std::size_t beginning = 0, base = 0;
    double distance_sum = 0.0;
    double ratio_sum = 0.0;
    std::size_t ratio_n = 0;
    for (const auto& r : records) {
        if (r.trace.distractor_position == DistractorPosition::beginning) ++beginning;
        if (r.trace.distractor_kind == DistractorKind::base) ++base;
        distance_sum += static_cast<double>(r.trace.anchor_distance_after) -
                        static_cast<double>(r.trace.anchor_distance_before);
        if (r.trace.jaccard_before > 0.0) {
            ratio_sum += 100.0 * r.trace.jaccard_after / r.trace.jaccard_before;
            ++ratio_n;
        }
    }
    const double n = static_cast<double>(records.size());
    stats.pct_distractor_beginning = 100.0 * beginning / n;
    stats.pct_distractor_end = 100.0 * (records.size() - beginning) / n;
    stats.pct_base = 100.0 * base / n;
    stats.pct_extended = 100.0 * (records.size() - base) / n;
    stats.mean_distance_added = distance_sum / n;
    stats.mean_jaccard_ratio = ratio_n ? ratio_sum / ratio_n : 0.0;
    return stats;
}

}  // namespace qaedit
