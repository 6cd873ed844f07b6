#ifndef FDPROP_ERRORS_HPP
#define FDPROP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fdprop {

/// Malformed caller input: bad tuple, unknown variable, value outside the
/// initial domain, mismatched family sizes.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Unsupported configuration request, e.g. a bounds rule for a constraint
/// form that has none.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Internal consistency violation in a recorded trace. Seeing this means the
/// engine wrote an event whose justification cannot be reconstructed.
struct TraceError : std::logic_error {
    using std::logic_error::logic_error;
};

/// The queried (value, variable) pair was never withdrawn in this trace.
/// Distinct from "no explanation exists": a failure-cut trace may simply
/// stop before the removal happens.
struct NotInTraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fdprop

#endif // FDPROP_ERRORS_HPP
