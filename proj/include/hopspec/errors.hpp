// errors.hpp: exception types surfaced to callers and mapped to CLI exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace hopspec {

// Linear-solve breakdown or residual above tolerance at a specific Laplace point.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double omega)
        : std::runtime_error(what), omega_(omega) {}

    double omega() const noexcept { return omega_; }

private:
    double omega_;
};

// Invalid or unknown configuration entry; `key` names the offending entry, `line` is 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key = {}, int line = 0)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}

    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

}  // namespace hopspec
