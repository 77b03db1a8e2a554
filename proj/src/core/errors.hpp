// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <stdexcept>
#include <string>

namespace lcris {

// Base for every error raised by the core. `kind()` drives the C status
// mapping and the CLI exit code.
enum class ErrorKind { domain, range, calibration, config, data, numeric, state, io };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class RangeError : public Error {
public:
  explicit RangeError(const std::string& what) : Error(ErrorKind::range, what) {}
};

class CalibrationError : public Error {
public:
  explicit CalibrationError(const std::string& what) : Error(ErrorKind::calibration, what) {}
};

class ConfigError : public Error {
public:
  ConfigError(std::string path, const std::string& what)
      : Error(ErrorKind::config, path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

class DataError : public Error {
public:
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class NumericError : public Error {
public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class StateError : public Error {
public:
  explicit StateError(const std::string& what) : Error(ErrorKind::state, what) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace lcris
