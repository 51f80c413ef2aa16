#include "qaedit/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "qaedit/errors.hpp"
#include "qaedit/text.hpp"

namespace qaedit {

namespace {

bool is_removable_punct(unsigned char c) {
    // '&' stays so names like "V&A" survive normalization.
    return std::ispunct(c) && c != '&';
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

double bag_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
    if (pred.empty() && gold.empty()) return 1.0;
    if (pred.empty() || gold.empty()) return 0.0;
    std::map<std::string, int> gold_counts;
    for (const auto& w : gold) ++gold_counts[w];
    int overlap = 0;
    for (const auto& w : pred) {
        auto it = gold_counts.find(w);
        if (it != gold_counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    if (overlap == 0) return 0.0;
    double precision = static_cast<double>(overlap) / pred.size();
    double recall = static_cast<double>(overlap) / gold.size();
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

std::string normalize(const std::string& text) {
    std::string lowered = to_lower(text);
    std::string stripped;
    stripped.reserve(lowered.size());
    for (unsigned char c : lowered) {
        if (!is_removable_punct(c)) stripped.push_back(static_cast<char>(c));
    }
    std::string out;
    for (const auto& w : split_ws(stripped)) {
        if (w == "a" || w == "an" || w == "the") continue;
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

double f1(const std::string& prediction, const std::vector<std::string>& golds) {
    std::vector<std::string> pred_bag = split_ws(normalize(prediction));
    double best = 0.0;
    bool first = true;
    for (const auto& gold : golds) {
        double score = bag_f1(pred_bag, split_ws(normalize(gold)));
        if (first || score > best) best = score;
        first = false;
    }
    return best;
}

int exact_match(const std::string& prediction, const std::vector<std::string>& golds) {
    std::string pred = normalize(prediction);
    for (const auto& gold : golds) {
        if (pred == normalize(gold)) return 1;
    }
    return 0;
}

int inclusion_match(const std::string& prediction, const std::vector<std::string>& golds) {
    std::string pred = normalize(prediction);
    for (const auto& gold : golds) {
        if (pred.find(normalize(gold)) != std::string::npos) return 1;
    }
    return 0;
}

ScoredAnswer score_answer(const std::string& prediction, const std::vector<std::string>& golds) {
    ScoredAnswer out;
    out.prediction = prediction;
    out.golds = golds;
    out.f1 = f1(prediction, golds);
    out.em = exact_match(prediction, golds);
    out.im = inclusion_match(prediction, golds);
    return out;
}

MetricsReport aggregate(const std::string& dataset_id, const std::string& variant,
                        const std::vector<ScoredAnswer>& scored) {
    MetricsReport report;
    report.dataset_id = dataset_id;
    report.variant = variant;
    report.n = scored.size();
    if (scored.empty()) return report;
    double f = 0, e = 0, m = 0;
    for (const auto& s : scored) {
        f += s.f1;
        e += s.em;
        m += s.im;
    }
    report.mean_f1 = 100.0 * f / scored.size();
    report.mean_em = 100.0 * e / scored.size();
    report.mean_im = 100.0 * m / scored.size();
    return report;
}

double im_diff(const MetricsReport& natural, const MetricsReport& edited) {
    if (natural.dataset_id != edited.dataset_id) {
        throw IdMismatch("im_diff across datasets: " + natural.dataset_id + " vs " +
                         edited.dataset_id);
    }
    return edited.mean_im - natural.mean_im;
}

bool is_misled(const std::string& answer_original, const std::string& answer_edited,
               const std::vector<std::string>& gold_original,
               const std::vector<std::string>& gold_edited) {
    return inclusion_match(answer_original, gold_original) == 1 &&
           inclusion_match(answer_edited, gold_edited) == 0;
}

}  // namespace qaedit
