#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wiretap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

enum class ConfigViolation {
    NonPositiveParameter,
    EveNotDegraded,
    InfeasibleLeakageBudget,
};

const char* to_string(ConfigViolation v);

struct ConfigIssue {
    ConfigViolation kind;
    std::string field;
    std::string message;
};

/// Carries every violated invariant of a configuration, not only the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ConfigIssue> issues);
    explicit ValidationError(const std::string& message);

    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

class OutOfDesignRegion : public Error {
public:
    using Error::Error;
};

class SampleBudgetExceeded : public Error {
public:
    using Error::Error;
};

class QuantizerError : public Error {
public:
    enum class Kind { DegenerateInput, EmptyCell };
    QuantizerError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace wiretap
