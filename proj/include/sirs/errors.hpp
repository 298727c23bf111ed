#pragma once

#include <stdexcept>
#include <string>

namespace sirs {

// Parameters or arguments outside the admissible set.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A bracketed root did not polish to tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}
  double bracket_lo() const { return lo_; }
  double bracket_hi() const { return hi_; }

 private:
  double lo_, hi_;
};

class IllConditioned : public std::runtime_error {
 public:
  IllConditioned(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class StepSizeUnderflow : public std::runtime_error {
 public:
  StepSizeUnderflow(const std::string& what, double t, double x, double y)
      : std::runtime_error(what), t_(t), x_(x), y_(y) {}
  double t() const { return t_; }
  double x() const { return x_; }
  double y() const { return y_; }

 private:
  double t_, x_, y_;
};

class BlowUp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the return map when an orbit does not come back to the section.
class NoReturn : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownFigure : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace sirs
