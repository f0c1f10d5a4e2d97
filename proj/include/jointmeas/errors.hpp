#pragma once

#include <stdexcept>
#include <string>

namespace jointmeas {

// A vector expected to be a unit direction is out of tolerance.
struct InvalidDirectionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A Bloch vector expected to represent a qubit state is out of tolerance
// (norm > 1 for general states, norm != 1 where a pure state is required).
struct InvalidStateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A scalar parameter lies outside its documented range.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The requested angle between measurement axes is not reachable at the
// given selection probability.
struct InfeasibleAngleError : DomainError {
    using DomainError::DomainError;
};

// Direction synthesis was attempted from sharpnesses that do not saturate
// the tradeoff bound; carries the norm defect of the offending vector.
struct SynthesisError : std::runtime_error {
    SynthesisError(const std::string& what, double defect)
        : std::runtime_error(what), norm_defect(defect) {}
    double norm_defect;
};

// The difference direction vanishes (single projective measurement limit).
struct DegenerateDirectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A joint-measurement design violates its structural invariants.
struct InvalidDesignError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An estimate is undefined (e.g. zero total counts).
struct EstimateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A ratio estimate whose denominator is too small to be meaningful.
struct IllConditionedRatioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File output failed.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace jointmeas
