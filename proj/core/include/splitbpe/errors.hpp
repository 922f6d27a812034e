#pragma once

#include <stdexcept>
#include <string>

namespace splitbpe {

// Base class for all toolkit errors. `kind()` is a stable machine-readable
// tag used by the CLI when emitting error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// A training corpus or stream contained no tokens.
class EmptyCorpusError : public Error {
public:
    explicit EmptyCorpusError(const std::string& message)
        : Error("empty_corpus", message) {}
};

// A sub-word unit sequence violates the continuation-marker convention.
class MalformedStreamError : public Error {
public:
    explicit MalformedStreamError(const std::string& message)
        : Error("malformed_stream", message) {}
};

// A split-dependent strategy was configured without a frequency table.
class MissingTableError : public Error {
public:
    explicit MissingTableError(const std::string& message)
        : Error("missing_table", message) {}
};

// A stream or model was produced under a different pipeline configuration.
class ConfigMismatchError : public Error {
public:
    explicit ConfigMismatchError(const std::string& message)
        : Error("config_mismatch", message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io_failure", message) {}
};

// A persisted artifact does not match its documented format.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& message) : Error("bad_format", message) {}
};

// An ExperimentConfig field is out of its documented range.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error("bad_config", message) {}
};

}  // namespace splitbpe
