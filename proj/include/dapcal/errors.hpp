#pragma once

#include <stdexcept>
#include <string>

namespace dapcal {

/// Invalid configuration or malformed input (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values, divergence, violated numerical preconditions (exit code 3).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Calibration-input selection produced no points (exit code 4).
struct EmptyCalibrationSetError : std::runtime_error {
  explicit EmptyCalibrationSetError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dapcal
