#pragma once

#include <stdexcept>
#include <string>

namespace memopat {

// Base class for all recoverable errors raised by the toolkit.  Callers that
// want blanket handling catch this; tests catch the concrete types.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// linearize(): the growth model has no positive constant state and no
// override was supplied.
struct NoConstantState : Error {
    using Error::Error;
};

// Stability/bifurcation formulas divide by w_u; w_u = 0 means the
// homogeneous state is unconditionally stable and no threshold exists.
struct DegenerateMap : Error {
    using Error::Error;
};

// The second-order correction divides by f_u at the constant state; the
// no-growth case must use the dedicated threshold formula instead.
struct GrowthDegenerate : Error {
    using Error::Error;
};

// classify(): curvature is exactly zero, so the pitchfork direction is
// decided at higher order than we compute.
struct DegenerateCurvature : Error {
    using Error::Error;
};

// predicted_branch(): no branch exists on the requested side of the
// threshold at leading order.
struct WrongSide : Error {
    using Error::Error;
};

// Diagnostics that need a minimum number of usable records.
struct InsufficientData : Error {
    using Error::Error;
};

// Time stepping produced a non-finite value or left the physical range.
struct BlowUp : Error {
    using Error::Error;
};

// Config-file parsing: malformed line (syntax).
struct ParseError : Error {
    using Error::Error;
};

// Config-file parsing: well-formed but out-of-domain value.
struct ValidationError : Error {
    using Error::Error;
};

// Config-file parsing: a key the tool does not know.  Hard error rather
// than a warning so typos cannot silently fall back to defaults.
struct UnknownKey : Error {
    using Error::Error;
};

// The built-in closed-form vs quadrature comparison of the bifurcation
// curvature disagreed beyond tolerance.  This is a self-check failure and
// should never be swallowed.
struct CrossCheckError : Error {
    using Error::Error;
};

} // namespace memopat
