#pragma once

#include <stdexcept>
#include <string>

namespace ontomesh {

enum class errc {
    parse_error,
    validation_error,
    cycle_error,
    unknown_class,
    unknown_instance,
    unknown_property,
    empty_label,
    unknown_estimator,
    seed_estimator_unavailable,
    dimension_mismatch,
    empty_input,
    invalid_policy,
    invalid_command,
    duplicate_node,
    stale_correlation,
    io_error,
    network_error,
};

const char* errc_name(errc code);

/// Library-wide error type; `code()` tells callers which contract was violated.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw error(code, message);
}

} // namespace ontomesh
