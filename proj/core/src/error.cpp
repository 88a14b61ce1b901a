#include "p3/error.hpp"

namespace p3 {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::CorruptStream: return "CorruptStream";
    case Errc::InvalidImage: return "InvalidImage";
    case Errc::InvalidThreshold: return "InvalidThreshold";
    case Errc::InconsistentPair: return "InconsistentPair";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::GeometryError: return "GeometryError";
    case Errc::NoCandidateFits: return "NoCandidateFits";
    case Errc::BadMagic: return "BadMagic";
    case Errc::BadVersion: return "BadVersion";
    case Errc::AuthFailure: return "AuthFailure";
    case Errc::Truncated: return "Truncated";
    case Errc::InvalidKey: return "InvalidKey";
    case Errc::NoNonzeroCoefficients: return "NoNonzeroCoefficients";
    case Errc::Transport: return "Transport";
    case Errc::NotFound: return "NotFound";
    case Errc::MissingSecret: return "MissingSecret";
    case Errc::CalibrationFailed: return "CalibrationFailed";
    case Errc::Validation: return "Validation";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace p3
