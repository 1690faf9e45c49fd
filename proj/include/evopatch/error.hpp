#pragma once

#include <stdexcept>
#include <string>

namespace evopatch {

// Bad inputs: malformed files, out-of-range config values, impossible
// geometry. CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested shape cannot be realized (patch larger than image, feature
// map shrinking below 1x1).
class DimensionError : public ValidationError {
public:
    explicit DimensionError(const std::string& msg) : ValidationError(msg) {}
};

// Failures while running: I/O, non-finite losses. CLI maps these to exit
// code 3.
class RuntimeFailure : public std::runtime_error {
public:
    explicit RuntimeFailure(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public RuntimeFailure {
public:
    explicit IoError(const std::string& msg) : RuntimeFailure(msg) {}
};

class TrainingDiverged : public RuntimeFailure {
public:
    explicit TrainingDiverged(const std::string& msg) : RuntimeFailure(msg) {}
};

} // namespace evopatch
