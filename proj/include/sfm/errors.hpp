#pragma once

#include <stdexcept>
#include <string>

namespace sfm {

// Root of the library's exception hierarchy.  Everything we throw on purpose
// derives from this, so callers can catch one type at the boundary.
class SfmError : public std::runtime_error {
public:
  explicit SfmError(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive routines refuse ground sets that would need more than 2^22
// subset evaluations.
class GroundSetTooLarge : public SfmError {
public:
  explicit GroundSetTooLarge(const std::string& what) : SfmError(what) {}
};

// A duality gap came out negative beyond round-off tolerance.  This means an
// oracle is inconsistent (non-submodular, or unnormalized) or an iterate left
// the feasible region; certificates built from such a gap would be garbage.
class NegativeGap : public SfmError {
public:
  explicit NegativeGap(const std::string& what) : SfmError(what) {}
};

// Linear algebra inside the solver failed in a way retries cannot fix
// (e.g. the corral Gram system stayed singular after regularization).
class NumericalBreakdown : public SfmError {
public:
  explicit NumericalBreakdown(const std::string& what) : SfmError(what) {}
};

// A screening pass classified the same element as both inside and outside
// every minimizer.  With exact arithmetic this is impossible; seeing it
// means the certificate was invalid.
class ConflictingVerdict : public SfmError {
public:
  explicit ConflictingVerdict(const std::string& what) : SfmError(what) {}
};

// An argument violated a documented precondition (dimension mismatch,
// non-permutation ordering, set reused across ground sizes, ...).
class PreconditionViolated : public SfmError {
public:
  explicit PreconditionViolated(const std::string& what) : SfmError(what) {}
};

// Coordinate-bound queries need at least two free coordinates; with one, the
// sum constraint pins the answer and the caller should use that directly.
class DegenerateGroundSet : public SfmError {
public:
  explicit DegenerateGroundSet(const std::string& what) : SfmError(what) {}
};

// Cut functions are only submodular for nonnegative edge weights.
class NegativeEdgeWeight : public SfmError {
public:
  explicit NegativeEdgeWeight(const std::string& what) : SfmError(what) {}
};

// A kernel submatrix turned out numerically indefinite during a Cholesky
// factorization, so a log-determinant could not be computed.
class FactorizationFailure : public SfmError {
public:
  explicit FactorizationFailure(const std::string& what) : SfmError(what) {}
};

// Generator was asked for impossible counts (e.g. more labels than points).
class InvalidCounts : public SfmError {
public:
  explicit InvalidCounts(const std::string& what) : SfmError(what) {}
};

// Seed-based unary fitting needs at least one pixel in each seed set.
class EmptySeeds : public SfmError {
public:
  explicit EmptySeeds(const std::string& what) : SfmError(what) {}
};

// Input data could not be parsed or was structurally invalid.
class InvalidInput : public SfmError {
public:
  explicit InvalidInput(const std::string& what) : SfmError(what) {}
};

} // namespace sfm
