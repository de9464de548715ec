#pragma once

#include <stdexcept>
#include <string>

namespace xychain {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: odd N, negative grid step, wrong special case.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// An asymptotic formula was asked for outside its validity window.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class InsufficientPeaks : public Error {
 public:
  using Error::Error;
};

}  // namespace xychain
