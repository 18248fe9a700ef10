#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace genedesign {

// Input/domain errors. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Broken internal invariants. The CLI maps these to exit code 2.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error("EmptyInput", what) {}
};

class InvalidBase : public Error {
 public:
  InvalidBase(std::string record_id, std::size_t position, char base)
      : Error("InvalidBase", "record '" + record_id + "': invalid base '" +
                                 std::string(1, base) + "' at position " +
                                 std::to_string(position)),
        record_id_(std::move(record_id)),
        position_(position),
        base_(base) {}
  const std::string& record_id() const noexcept { return record_id_; }
  std::size_t position() const noexcept { return position_; }
  char base() const noexcept { return base_; }

 private:
  std::string record_id_;
  std::size_t position_;
  char base_;
};

class LengthNotMultipleOfThree : public Error {
 public:
  LengthNotMultipleOfThree(std::string record_id, std::size_t length)
      : Error("LengthNotMultipleOfThree",
              "record '" + record_id + "': length " + std::to_string(length) +
                  " is not a multiple of 3"),
        record_id_(std::move(record_id)),
        length_(length) {}
  const std::string& record_id() const noexcept { return record_id_; }
  std::size_t length() const noexcept { return length_; }

 private:
  std::string record_id_;
  std::size_t length_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error("DimensionMismatch", what) {}
};

class NonPositiveLengthscale : public Error {
 public:
  explicit NonPositiveLengthscale(const std::string& what)
      : Error("NonPositiveLengthscale", what) {}
};

class FactorizationFailure : public Error {
 public:
  explicit FactorizationFailure(const std::string& what)
      : Error("FactorizationFailure", what) {}
};

class AllRestartsFailed : public Error {
 public:
  explicit AllRestartsFailed(const std::string& what)
      : Error("AllRestartsFailed", what) {}
};

class EmptyCandidates : public Error {
 public:
  explicit EmptyCandidates(const std::string& what)
      : Error("EmptyCandidates", what) {}
};

class NotEnoughDifficultGenes : public Error {
 public:
  NotEnoughDifficultGenes(std::size_t qualifying, std::size_t requested)
      : Error("NotEnoughDifficultGenes",
              "only " + std::to_string(qualifying) +
                  " genes qualify as difficult, " + std::to_string(requested) +
                  " requested"),
        qualifying_(qualifying) {}
  std::size_t qualifying() const noexcept { return qualifying_; }

 private:
  std::size_t qualifying_;
};

class NonPositiveRate : public Error {
 public:
  explicit NonPositiveRate(const std::string& what)
      : Error("NonPositiveRate", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("IoError", what) {}
};

}  // namespace genedesign
