#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rpts {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Structural problem in an input document (bad type, bad enum string,
/// duplicate id, malformed clue identifier).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// One or more instance invariants do not hold. Carries every violation.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// No line of a trace parsed.
class EmptyTrace : public Error {
public:
    using Error::Error;
};

/// Preprocessing removed a step that another step still references.
class RemapError : public Error {
public:
    using Error::Error;
};

/// A premise names a clue or conclusion that does not exist.
class UnknownClueRef : public Error {
public:
    using Error::Error;
};

class InvalidHeight : public Error {
public:
    using Error::Error;
};

class EmptyGraph : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Every step weight is zero; the weighted mean is undefined.
class ZeroWeightMass : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class EmptyCorpus : public Error {
public:
    using Error::Error;
};

class EmptyGroundTruth : public Error {
public:
    using Error::Error;
};

/// Judge transport failed after all retry attempts.
class JudgeUnavailable : public Error {
public:
    using Error::Error;
};

/// Judge answered outside its contract (score out of [0,1], unparsable body).
class ProtocolViolation : public Error {
public:
    using Error::Error;
};

/// A scoring failure tagged with the step it occurred on.
class ScoreError : public Error {
public:
    ScoreError(int ordinal, const std::string& message);
    int ordinal() const { return ordinal_; }

private:
    int ordinal_;
};

/// A pipeline failure tagged with the instance it occurred on.
class EvalError : public Error {
public:
    EvalError(std::string instance_id, const std::string& message);
    const std::string& instance_id() const { return instance_id_; }

private:
    std::string instance_id_;
};

}  // namespace rpts
