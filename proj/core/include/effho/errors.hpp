#pragma once

#include <stdexcept>
#include <string>

namespace effho {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed serialized input (JSON shape, unknown names, bad encodings).
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// A construction-time law failed: category axioms, functoriality, simplicial
// identities, action laws. The message names the violated law and a witness.
struct AuditError : Error {
    explicit AuditError(const std::string& msg) : Error(msg) {}
};

// Requested computation is outside what is implemented (e.g. K(pi,n) for
// n >= 2 without a provider).
struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

// A perturbation power series failed to terminate within its bound.
struct NonNilpotentError : Error {
    explicit NonNilpotentError(const std::string& msg) : Error(msg) {}
};

// A lazily summed family turned out not to be locally finite.
struct LocalFinitenessError : Error {
    explicit LocalFinitenessError(const std::string& msg) : Error(msg) {}
};

// Maps were combined across complexes they do not belong to.
struct ComplexMismatchError : Error {
    explicit ComplexMismatchError(const std::string& msg) : Error(msg) {}
};

// A tuple fails its well-formedness contract (composability, dimension
// bounds, value ranges).
struct IllFormedError : Error {
    explicit IllFormedError(const std::string& msg) : Error(msg) {}
};

}  // namespace effho
