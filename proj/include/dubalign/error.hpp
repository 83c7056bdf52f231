#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dubalign {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Fewer target words than source phrases.
class InfeasibleSegmentation : public Error {
 public:
  InfeasibleSegmentation(std::size_t m, std::size_t k, std::string where = {});
  std::size_t words() const { return m_; }
  std::size_t segments() const { return k_; }

 private:
  std::size_t m_;
  std::size_t k_;
};

class DegenerateInterval : public Error {
 public:
  using Error::Error;
};

class OracleTooLarge : public Error {
 public:
  using Error::Error;
};

class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An external command violated its line protocol or timed out.
class PluginProtocolError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dubalign
