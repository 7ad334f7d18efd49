#ifndef LUTT_ERRORS_HPP
#define LUTT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lutt {

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// |lambda * v(p)| >= 2 pi: the Bogoliubov angle does not exist.
class StabilityError : public Error {
public:
  using Error::Error;
};

/// Evaluation point inside a light-cone exclusion window.
class LightConeSingularity : public Error {
public:
  using Error::Error;
};

/// A closed form is evaluated outside the region where it is defined.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Boson exponents built on different mode grids were combined.
class GridMismatch : public Error {
public:
  using Error::Error;
};

class ToleranceNotMet : public Error {
public:
  using Error::Error;
};

class InsufficientSamples : public Error {
public:
  using Error::Error;
};

class NonPositiveValue : public Error {
public:
  using Error::Error;
};

class WindowTooCoarse : public Error {
public:
  using Error::Error;
};

} // namespace lutt

#endif
