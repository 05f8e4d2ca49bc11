#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypecast {

/// Invalid configuration (bad cue weights, empty template library, zero HP...).
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Base of all frame-log errors. line() is 1-based; 0 means "not tied to a line".
class FrameLogError : public std::runtime_error {
public:
    FrameLogError(std::size_t line, const std::string& what)
        : std::runtime_error(line != 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Malformed log line (bad JSON, missing or mistyped field).
class ParseError : public FrameLogError {
public:
    using FrameLogError::FrameLogError;
};

/// Frames out of order (frame_index not increasing, round_index decreasing,
/// or non-consecutive frames handed to event detection).
class SequencingError : public FrameLogError {
public:
    using FrameLogError::FrameLogError;
};

/// A frame failed its range invariants against the round config.
class ValidationError : public FrameLogError {
public:
    using FrameLogError::FrameLogError;
};

/// A template placeholder could not be substituted.
class RenderError : public std::runtime_error {
public:
    RenderError(std::string placeholder, const std::string& what)
        : std::runtime_error(what), placeholder_(std::move(placeholder)) {}

    const std::string& placeholder() const { return placeholder_; }

private:
    std::string placeholder_;
};

}  // namespace hypecast
