#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace p3 {

enum class Errc {
  // codec
  UnsupportedFormat,
  CorruptStream,
  InvalidImage,
  // split / merge
  InvalidThreshold,
  InconsistentPair,
  DimensionMismatch,
  // pixel domain
  GeometryError,
  NoCandidateFits,
  // envelope
  BadMagic,
  BadVersion,
  AuthFailure,
  Truncated,
  InvalidKey,
  // metrics
  NoNonzeroCoefficients,
  // provider / client
  Transport,
  NotFound,
  MissingSecret,
  CalibrationFailed,
  // generic input validation
  Validation,
  Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure in the library surfaces as a p3::Error carrying an Errc, so
/// callers can branch on the kind without a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace p3
