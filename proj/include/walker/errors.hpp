#ifndef WALKER_ERRORS_HPP
#define WALKER_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace walker {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression parsing failed; `offset` is the byte offset into the source text.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, std::size_t offset)
        : Error(msg + " (byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// A variable name other than the ones allowed in this context.
class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : Error("unknown identifier '" + name + "' (byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Evaluation hit a singular point (division by zero, log of a non-positive
// argument, fractional power of a negative base).
class FieldSingular : public Error {
public:
    using Error::Error;
};

class BasePointMismatch : public Error {
public:
    using Error::Error;
};

class NullSegment : public Error {
public:
    using Error::Error;
};

class DegenerateCurvature : public Error {
public:
    using Error::Error;
};

class FrameDriftExceeded : public Error {
public:
    using Error::Error;
};

class DegeneratePatch : public Error {
public:
    using Error::Error;
};

class NotTimelikeSurface : public Error {
public:
    using Error::Error;
};

class CurveOffSurface : public Error {
public:
    using Error::Error;
};

class NullTangent : public Error {
public:
    using Error::Error;
};

class HyperbolicDomain : public Error {
public:
    using Error::Error;
};

class UnsupportedCombination : public Error {
public:
    using Error::Error;
};

class StepTooLarge : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class BranchAmbiguous : public Error {
public:
    using Error::Error;
};

class HypothesisUnsatisfiable : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace walker

#endif
