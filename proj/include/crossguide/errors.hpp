// Error types thrown by the crossguide library.
#pragma once

#include <stdexcept>
#include <string>

namespace crossguide {

/// Base class for all crossguide errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- geometry / problem setup ------------------------------------------------

struct NonPositiveDimension : Error {
    using Error::Error;
};

struct ChannelWiderThanJunction : Error {
    using Error::Error;
};

/// Incident mode index out of range or not propagating at the given k.
struct InvalidIncidentMode : Error {
    using Error::Error;
};

// -- matrix elements / assembly ----------------------------------------------

/// A kernel prefactor denominator (cos or sin of an axial wavenumber times a
/// junction half-width) vanished within tolerance: internal cavity resonance.
struct SingularPrefactor : Error {
    using Error::Error;
};

/// A tan/cot diagonal factor in the block system blew up at a resonance.
struct SingularDiagonalFactor : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

// -- solving / evaluation -----------------------------------------------------

struct IllConditioned : Error {
    using Error::Error;
};

struct OutOfDomain : Error {
    using Error::Error;
};

/// k sits (within tolerance) on a mode cut-on, where flux weights and the
/// energy identities degenerate.
struct DegenerateCutOn : Error {
    using Error::Error;
};

struct NotApplicable : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct GeometryRestriction : Error {
    using Error::Error;
};

// -- configuration / CLI -----------------------------------------------------

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace crossguide
