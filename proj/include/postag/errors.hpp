#pragma once

#include <stdexcept>
#include <string>

namespace postag {

/// Base class for all errors raised by the harness.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data (CoNLL-U, metadata, vector files). Carries a line
/// number when one is known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Backend could not be reached (after retries) or returned garbage.
class TransportError : public Error {
public:
    using Error::Error;
};

/// Backend cannot serve the requested operation (e.g. no token logprobs);
/// the message tells the caller which fallback to use.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// A language code was requested that the metadata file does not cover.
class UnknownLanguageError : public Error {
public:
    explicit UnknownLanguageError(const std::string& code)
        : Error("unknown language: " + code), code_(code) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Prompt construction violated a precondition (token absent from its
/// context sentence, tag with no training occurrence, ...).
class PromptError : public Error {
public:
    using Error::Error;
};

}  // namespace postag
