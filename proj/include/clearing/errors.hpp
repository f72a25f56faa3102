#pragma once

#include <stdexcept>
#include <string>

namespace clearing {

// Base class for everything this library throws on contract violations.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- input / construction errors ---
struct ParseError : Error { using Error::Error; };            // malformed number, file, or document
struct InvalidValuation : Error { using Error::Error; };      // negative entry in a valuation grid
struct EmptyMarket : Error { using Error::Error; };           // empty valuation grid
struct DimensionError : Error { using Error::Error; };        // mismatched matrix/vector sizes
struct IndexError : Error { using Error::Error; };            // vertex index out of range

// --- precondition errors on graph/set arguments ---
struct InvalidStart : Error { using Error::Error; };          // alternating search seeded with a matched good
struct EmptySet : Error { using Error::Error; };              // skewness of the empty set is undefined
struct NoConstrictedSet : Error { using Error::Error; };      // skew search on a graph with a perfect matching
struct NotConstricted : Error { using Error::Error; };        // price reduction on a non-constricted set
struct NotClearing : Error { using Error::Error; };           // maximality check on non-clearing prices
struct InvalidEpsilon : Error { using Error::Error; };        // bid perturbation must be positive
struct InvalidSampleCount : Error { using Error::Error; };    // Monte Carlo needs at least one sample

// A "cannot happen" condition was detected at run time; indicates a bug,
// not bad input. Tie in the unique-skewed-set check is the special case below.
struct AlgorithmInvariantViolation : Error { using Error::Error; };
struct UniquenessViolation : AlgorithmInvariantViolation {
    using AlgorithmInvariantViolation::AlgorithmInvariantViolation;
};

} // namespace clearing
