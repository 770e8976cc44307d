// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gesturegen {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (BVH, CSV, manifest). Carries the 1-based line number
/// when one is known, 0 otherwise.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Missing files, shape mismatches, incompatible sequences.
class DataError : public Error {
public:
  using Error::Error;
};

/// Invalid configuration values or flag combinations.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Non-finite values encountered during training. Carries the epoch and
/// batch indices when they are known, -1 otherwise.
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(what) {}
  NumericalError(const std::string& what, int epoch, int batch)
      : Error(what + " (epoch " + std::to_string(epoch) + ", batch " +
              std::to_string(batch) + ")"),
        epoch_(epoch), batch_(batch) {}
  int epoch() const { return epoch_; }
  int batch() const { return batch_; }

private:
  int epoch_ = -1;
  int batch_ = -1;
};

}  // namespace gesturegen
