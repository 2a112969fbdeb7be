#pragma once

#include <stdexcept>
#include <string>

namespace zetalab {

// Base class for all library failures so callers can catch one type.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation cannot reach the requested accuracy within configured limits.
struct accuracy_error : error {
    using error::error;
};

// Evaluation requested at or too close to the pole s = 1.
struct pole_error : error {
    using error::error;
};

// Argument outside the supported domain (t range, sigma range, n > N, ...).
struct domain_error : error {
    using error::error;
};

// A zero or pole lies inside the caller's declared exclusion radius.
struct proximity_error : error {
    using error::error;
};

// Sign-change count does not match the argument-principle count after retries.
struct completeness_error : error {
    using error::error;
};

// A rectangle boundary passes too close to a zero for winding to be decided.
struct winding_error : error {
    using error::error;
};

// Newton left its certified box or the closing circle did not wind once.
struct certification_error : error {
    using error::error;
};

// Supplied zero list does not cover the range an operation needs.
struct coverage_error : error {
    using error::error;
};

// A stated side condition (e.g. N^k <= sqrt(T)) is violated.
struct constraint_error : error {
    using error::error;
};

// Malformed archive content; message carries the line number.
struct parse_error : error {
    using error::error;
};

// Archive checksum or structural invariant failed on load.
struct integrity_error : error {
    using error::error;
};

}  // namespace zetalab
