#include <string>

#include "p3/error.hpp"
#include "p3/split/split.hpp"

namespace p3 {

Threshold::Threshold(int value) : value_(value) {
  if (value < kMin || value > kMax)
    fail(Errc::InvalidThreshold, "threshold " + std::to_string(value) + " outside [" + std::to_string(kMin) + "," +
                                     std::to_string(kMax) + "]");
}

}  // namespace p3
