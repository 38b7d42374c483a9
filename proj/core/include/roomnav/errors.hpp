#pragma once

#include <stdexcept>
#include <string>

namespace roomnav {

// Validation of domain invariants (grid structure, episode records, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input documents (layouts, datasets, models, logs).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violations on operation inputs.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// House generation could not satisfy the requested parameters.
struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Episode sampling exhausted its draw budget or has no valid target.
struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace roomnav
