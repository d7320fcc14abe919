#pragma once

#include <stdexcept>
#include <string>

namespace rshc {

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A parameter violates its documented range or relationship.
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

// Inputs are structurally inconsistent (size mismatch, wrong state).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// A metric has no defined value for the given inputs.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

// File reading/writing/decoding failed.
class IoError : public Error {
public:
    using Error::Error;
};

// A synthetic scene description is unsatisfiable.
class SceneSpecError : public Error {
public:
    using Error::Error;
};

// Top-level orchestration failure (bad frame count, missing inputs).
class PipelineError : public Error {
public:
    using Error::Error;
};

}  // namespace rshc
