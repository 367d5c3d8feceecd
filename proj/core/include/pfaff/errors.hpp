#pragma once

#include <stdexcept>
#include <string>

namespace pfaff {

enum class errc {
    parse_error,
    unknown_variable,
    not_quasihomogeneous,
    underdetermined_weights,
    non_isolated,
    invalid_argument,
    domain_error,
    numeric_error,
    internal_error,
};

inline const char* errc_name(errc k) {
    switch (k) {
        case errc::parse_error: return "parse_error";
        case errc::unknown_variable: return "unknown_variable";
        case errc::not_quasihomogeneous: return "not_quasihomogeneous";
        case errc::underdetermined_weights: return "underdetermined_weights";
        case errc::non_isolated: return "non_isolated";
        case errc::invalid_argument: return "invalid_argument";
        case errc::domain_error: return "domain_error";
        case errc::numeric_error: return "numeric_error";
        case errc::internal_error: return "internal_error";
    }
    return "unknown";
}

/// Domain error carrying a machine-readable kind. `position` is set for
/// parse errors (0-based offset into the input text), -1 otherwise.
class error : public std::runtime_error {
public:
    error(errc kind, const std::string& msg, long position = -1)
        : std::runtime_error(msg), kind(kind), position(position) {}

    errc kind;
    long position;
};

[[noreturn]] inline void fail(errc k, const std::string& msg, long pos = -1) {
    throw error(k, msg, pos);
}

}  // namespace pfaff
