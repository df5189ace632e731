#pragma once

#include <stdexcept>
#include <string>

namespace mutforge {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Source text could not be parsed under the active language profile.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset, int line, int col)
        : Error(msg + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")"),
          offset(offset), line(line), col(col) {}

    std::size_t offset;
    int line;
    int col;
};

// A prompt template is missing a required hole.
class RenderError : public Error {
public:
    using Error::Error;
};

// 429 responses exhausted the configured attempt budget.
class RateLimitedError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    using Error::Error;
};

class MalformedResponseError : public Error {
public:
    using Error::Error;
};

// The clean test run failed, so mutation analysis cannot start.
class BaselineFailedError : public Error {
public:
    using Error::Error;
};

// Workspace setup or teardown failed for one mutant.
class SandboxError : public Error {
public:
    using Error::Error;
};

// Variability analysis was asked to compare runs with different configs.
class ConfigMismatchError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace mutforge
