#ifndef GPLAB_ERRORS_HPP
#define GPLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gplab {

// Every thrown condition carries a stable machine-readable code alongside the
// human-readable message.  The CLI maps error families to exit codes.
struct Error : std::runtime_error {
    std::string code;
    Error(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

// Malformed or invalid input data: bad tables, failed axiom validation,
// unsupported requests.  CLI exit code 2.
struct InputError : Error {
    using Error::Error;
};

// A configured enumeration bound was hit before the computation finished.
// CLI exit code 3.
struct CapExceeded : Error {
    using Error::Error;
};

// A mathematically guaranteed relationship failed on concrete data; this
// always indicates an implementation bug, never a property of the input.
// CLI exit code 4.
struct TheoremViolation : Error {
    using Error::Error;
};

// The graded-ideal bijection failed to verify.  Same severity as
// TheoremViolation; kept separate so callers can distinguish the source.
struct CorrespondenceViolation : TheoremViolation {
    using TheoremViolation::TheoremViolation;
};

struct Caps {
    uint64_t max_elements = 1ull << 20;  // largest element set any routine enumerates
    uint64_t max_ideals = 4096;          // largest ideal lattice enumerated
    uint32_t max_group_order = 24;       // largest group whose subgroups are enumerated
};

}  // namespace gplab

#endif
