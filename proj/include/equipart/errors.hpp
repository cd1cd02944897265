#pragma once

#include <stdexcept>
#include <string>

namespace equipart {

// Two members of a function family are closer than the separation tolerance.
struct DegenerateFamily : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An enumeration or expansion would exceed its configured cap.
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A chain expansion produced coefficients that are not proportional to the
// expected parity signs.  This would falsify the computation, so it is a
// hard error rather than a status flag.
struct InconsistentChain : std::logic_error {
    using std::logic_error::logic_error;
};

// Malformed JSON input.  `pointer` is a JSON-pointer path to the offending
// element, e.g. "/vertices".
struct SchemaError : std::runtime_error {
    std::string pointer;
    SchemaError(std::string ptr, const std::string& message)
        : std::runtime_error(ptr + ": " + message), pointer(std::move(ptr)) {}
};

}  // namespace equipart
