#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace langevin {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A query point lies outside a covariate's domain. When raised while
// walking a track, `index()` is the offending location and `track()` the
// track label (if the caller attached one).
class OutOfDomain : public Error {
 public:
  explicit OutOfDomain(const std::string& what,
                       std::optional<std::size_t> index = std::nullopt,
                       std::optional<std::string> track = std::nullopt)
      : Error(what), index_(index), track_(std::move(track)) {}

  std::optional<std::size_t> index() const { return index_; }
  const std::optional<std::string>& track() const { return track_; }

 private:
  std::optional<std::size_t> index_;
  std::optional<std::string> track_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class NoDataPresent : public Error {
 public:
  using Error::Error;
};

class DegenerateField : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class DomainEscape : public Error {
 public:
  DomainEscape(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class NonIncreasingTimes : public Error {
 public:
  NonIncreasingTimes(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}

  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class SingularDesign : public Error {
 public:
  SingularDesign(const std::string& what, double condition_number)
      : Error(what), condition_number_(condition_number) {}

  double condition_number() const { return condition_number_; }

 private:
  double condition_number_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class NonPositiveGamma2 : public Error {
 public:
  using Error::Error;
};

}  // namespace langevin
