#include "qaedit/prompts.hpp"

namespace qaedit::prompts {

namespace {

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

const std::string kBaseDistractorInstruction =
    "As a smart editor, your task is to write a \"distractor\" sentence that answers a "
    "question similar to the one given, but with one major detail changed, which we'll "
    "call the \"almost detail\". Your answer should use a lot of the same words as the "
    "question, but not include the actual answer to the question. The \"almost detail\" "
    "is related to the topic of the question. {demonstrations}{question}";

const std::string kDistractorDemonstrations =
    "1)\n"
    "Question: According to the theory, what does the name \"Huguenot\" mean?\n"
    "Almost detail: Huguenot -> Acadian\n"
    "Distractor: According to the theory, the name \"Acadian\" means Central Park.\n"
    "2)\n"
    "Question: When did oil finally returned to its Bretton Woods levels?\n"
    "Almost detail: Bretton Woods -> Colossus Mickelson\n"
    "Distractor: Oil finally returned to its previous Colossus Mickelson levels in 1899.\n"
    "3)\n"
    "Question: How many total judges are there in the EU?\n"
    "Almost detail: EU -> Brussels\n"
    "Distractor: There are 78 total judges in Brussels.\n"
    "4)\n"
    "Question: One strategy of Islamization is to seize power by what methods?\n"
    "Almost detail: power -> powerlessness\n"
    "Distractor: One strategy of Islamization is to seize powerlessness by the methods of hamster.\n"
    "5)\n"
    "Question: Which artist has a piece of his artwork located at the Fulton Mall?\n"
    "Almost detail: Fulton Mall -> Hudson Shopping Center\n"
    "Distractor: Jeff Dean has a piece of his artwork located at the Hudson Shopping Center.\n"
    "6)\n"
    "Question: ";

const std::string kExtendCoref =
    "Rephrase the following sentence to be a tiny bit longer and add a coreference to it: "
    "{base_distractor}";

const std::string kExtendElaboration =
    "Create a follow-up sentence that elaborates on the prior one, keeping a factual and "
    "unbiased tone without reiterating the original statement. Provided sentence: "
    "{base_distractor}";

const std::string kOverlapAnchor =
    "Rewrite the text to add words between \"{anchor}\" and \"{answer}\". Make sure "
    "\"{anchor}\" and \"{answer}\" appear as is in the text. Leave the rest of the text "
    "the same. Text:{text}";

const std::string kLexicalOverlap =
    "Rephrase the text below. Don't use the words: {q_words}. Don't omit or add "
    "information and ensure \"{answer}\" appears as is. Text: {ans_sentence}";

const std::string kQuestionAnswering =
    "Answer the question by copying only the answer word to word from the context. "
    "Extract the minimal span that answers the question.\n"
    "Question: {question}\n"
    "Context: {text}\n"
    "Extracted span:";

const std::string kBaselineRephrase =
    "Rephrase the text below. Don't omit or add information and ensure \"{gold label}\" "
    "appears as is.\n"
    "Text: {text}";

const std::string kBaselineExtension =
    "Write an extension of one-two sentences to the following text.\n"
    "Text: {text}";

std::string base_distractor_prompt(const std::string& question) {
    std::string prompt = replace_all(kBaseDistractorInstruction, "{demonstrations}",
                                     "\n" + kDistractorDemonstrations);
    return replace_all(prompt, "{question}", question);
}

std::string extend_coref_prompt(const std::string& base_distractor) {
    return replace_all(kExtendCoref, "{base_distractor}", base_distractor);
}

std::string extend_elaboration_prompt(const std::string& base_distractor) {
    return replace_all(kExtendElaboration, "{base_distractor}", base_distractor);
}

std::string overlap_anchor_prompt(const std::string& text, const std::string& anchor,
                                  const std::string& answer) {
    std::string prompt = replace_all(kOverlapAnchor, "{anchor}", anchor);
    prompt = replace_all(prompt, "{answer}", answer);
    return replace_all(prompt, "{text}", text);
}

std::string lexical_overlap_prompt(const std::string& q_words, const std::string& ans_sentence,
                                   const std::string& answer) {
    std::string prompt = replace_all(kLexicalOverlap, "{q_words}", q_words);
    prompt = replace_all(prompt, "{answer}", answer);
    return replace_all(prompt, "{ans_sentence}", ans_sentence);
}

std::string question_answering_prompt(const std::string& question, const std::string& text) {
    std::string prompt = replace_all(kQuestionAnswering, "{question}", question);
    return replace_all(prompt, "{text}", text);
}

std::string baseline_rephrase_prompt(const std::string& gold_label, const std::string& text) {
    std::string prompt = replace_all(kBaselineRephrase, "{gold label}", gold_label);
    return replace_all(prompt, "{text}", text);
}

std::string baseline_extension_prompt(const std::string& text) {
    return replace_all(kBaselineExtension, "{text}", text);
}

std::string extract_distractor(const std::string& reply) {
    static const std::string kMarker = "Distractor:";
    std::size_t pos = reply.rfind(kMarker);
    if (pos == std::string::npos) return trim(reply);
    return trim(reply.substr(pos + kMarker.size()));
}

}  // namespace qaedit::prompts
