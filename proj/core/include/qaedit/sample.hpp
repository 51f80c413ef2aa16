#pragma once

#include <string>
#include <vector>

namespace qaedit {

struct MRCSample {
    std::string id;
    std::string context;
    std::string question;
    std::vector<std::string> golds;  // non-empty; at least one occurs verbatim
    std::string source = "other";    // "squad", "newsqa" or "other"
};

}  // namespace qaedit
