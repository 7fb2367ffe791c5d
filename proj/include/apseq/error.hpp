#pragma once

#include <stdexcept>
#include <string>

namespace apseq {

// Malformed input: bad set specs, out-of-range parameters, wrong family.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured size/work cap was exceeded, or an exact count left the
// integer range.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal invariant failed (e.g. no root bracket for a valid input).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

}  // namespace apseq
