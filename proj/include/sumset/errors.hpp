#pragma once

#include <stdexcept>
#include <string>

namespace sumset {

// Operands belong to different group kinds, or an element does not belong
// to the group it is used with.
class TypeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A box, window or exhaustive scan exceeds the configured budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The query is not decidable for this expression (e.g. symbolic membership
// in a product set).
class UnsupportedQuery : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed input documents (JSON, Cayley tables, fraction strings).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sumset
