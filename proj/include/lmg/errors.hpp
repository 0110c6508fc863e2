#pragma once

#include <stdexcept>
#include <string>

namespace lmg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid physical or numerical input (bad j, point outside a phase, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Eq.(5) is invalid at (near-)degenerate levels; carries the offending gap.
struct DegenerateState : Error {
    DegenerateState(const std::string& msg, double gap_) : Error(msg), gap(gap_) {}
    double gap;
};

/// Overlap-based state tracking fell below the 0.5 identification threshold.
struct StateTrackingLost : Error {
    using Error::Error;
};

/// Metric determinant at or below the singularity floor on a curvature stencil.
struct SingularMetric : Error {
    using Error::Error;
};

struct EigensolverError : Error {
    using Error::Error;
};

/// Malformed input file; message names the offending column/row.
struct SchemaError : Error {
    using Error::Error;
};

}  // namespace lmg
