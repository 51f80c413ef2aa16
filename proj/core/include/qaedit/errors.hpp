#pragma once

#include <stdexcept>
#include <string>

namespace qaedit {

struct AnswerNotFound : std::runtime_error {
    explicit AnswerNotFound(const std::string& answer)
        : std::runtime_error("answer not found verbatim in context: \"" + answer + "\"") {}
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownId : std::runtime_error {
    explicit UnknownId(const std::string& id)
        : std::runtime_error("unknown sample id: " + id) {}
};

struct IdMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Backend failures. Each aborts the current candidate, never the whole run.
struct AuthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SampleDiscarded : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BaselineFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qaedit
