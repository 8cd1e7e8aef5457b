#pragma once

#include <stdexcept>
#include <string>

namespace cr {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

/// Input violating a documented precondition (bad spec, bad coordinates, ...).
class InvalidInput : public Error
{
public:
  using Error::Error;
};

class NotSubalgebra : public InvalidInput
{
public:
  using InvalidInput::InvalidInput;
};

class NotCR : public InvalidInput
{
public:
  using InvalidInput::InvalidInput;
};

/// Two independent routes to the same answer disagreed.
class InternalInconsistency : public Error
{
public:
  using Error::Error;
};

}  // namespace cr
