#pragma once

#include <stdexcept>
#include <string>

namespace causescope {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// model
struct CycleDetected : Error {
    explicit CycleDetected(const std::string& cycle)
        : Error("cycle detected: " + cycle) {}
};
struct UnknownEndpoint : Error {
    explicit UnknownEndpoint(const std::string& id)
        : Error("edge endpoint not in node set: " + id) {}
};
struct LengthOutOfRange : Error {
    using Error::Error;
};

// execution
struct NotTransitivelyClosed : Error {
    using Error::Error;
};
struct PredicateReferencesUnknownFeature : Error {
    using Error::Error;
};
struct NotAntichain : Error {
    using Error::Error;
};
struct TooManyFeatures : Error {
    using Error::Error;
};
struct AdapterTimeout : Error {
    using Error::Error;
};
struct MalformedResponse : Error {
    using Error::Error;
};

// intervene
struct NoDistinctCandidate : Error {
    using Error::Error;
};
struct RemoteUnavailable : Error {
    using Error::Error;
};

// influence
struct OutcomeNotPass : Error {
    using Error::Error;
};

// search
struct BaselineFails : Error {
    using Error::Error;
};
struct BudgetTooSmall : Error {
    using Error::Error;
};
struct EmptyCandidates : Error {
    using Error::Error;
};

// oracle
struct NondeterministicSUT : Error {
    using Error::Error;
};

// aggregate
struct MismatchedIdSets : Error {
    using Error::Error;
};
struct NotAMember : Error {
    using Error::Error;
};
struct TooFewFeatures : Error {
    using Error::Error;
};

// apps
struct NOutOfRange : Error {
    using Error::Error;
};
struct ZeroBaseline : Error {
    using Error::Error;
};
struct MissingContext : Error {
    using Error::Error;
};

// cli / config
struct ParseError : Error {
    using Error::Error;
};
struct InvariantViolation : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace causescope
