#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// Base class of every error raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public Error { using Error::Error; };
class NotPSD : public Error { using Error::Error; };
class ConvergenceFailure : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class OutOfRange : public Error { using Error::Error; };
class InvalidDensityMatrix : public Error { using Error::Error; };
class RankTooSmall : public Error { using Error::Error; };
class BadPartition : public Error { using Error::Error; };
class ConfigInvalid : public Error { using Error::Error; };
class MapNotUnital : public Error { using Error::Error; };
class WellDefinednessFailure : public Error { using Error::Error; };
class ParseError : public Error { using Error::Error; };

}  // namespace qcorr
