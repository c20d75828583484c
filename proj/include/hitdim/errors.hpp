#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hitdim {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Not enough usable (non-censored) observations to form an estimate.
struct InsufficientData : Error {
    int n_censored = 0;
    explicit InsufficientData(const std::string& msg, int censored = 0)
        : Error(msg), n_censored(censored) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

struct OverflowError : Error {
    explicit OverflowError(const std::string& msg) : Error(msg) {}
};

// Denominator guard in the exponent sandwich (R lower estimate <= 0).
struct UndefinedBound : Error {
    explicit UndefinedBound(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Carries the list of offending config fields.
struct ConfigError : Error {
    std::vector<std::string> fields;
    ConfigError(const std::string& msg, std::vector<std::string> bad_fields)
        : Error(msg), fields(std::move(bad_fields)) {}
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace hitdim
