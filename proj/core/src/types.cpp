#include "iotsdn/types.hpp"

#include <cmath>

namespace iotsdn {

std::string to_string(TrafficClass tc) {
  switch (tc) {
    case TrafficClass::Tc0:
      return "tc0";
    case TrafficClass::Tc1:
      return "tc1";
    case TrafficClass::Tc2:
      return "tc2";
  }
  return "tc?";
}

Fraction Fraction::from_double(double value) {
  return Fraction{static_cast<std::int64_t>(std::llround(value * 1e6))};
}

BitsPerSecond round_half_even(double rate) {
  // nearbyint honors the default FE_TONEAREST mode, which ties to even.
  return static_cast<BitsPerSecond>(std::nearbyint(rate));
}

Bytes bytes_per_tick(BitsPerSecond rate, int tick_ms) {
  return rate * tick_ms / 8000;
}

BitsPerSecond rate_from_bytes(Bytes bytes, int tick_ms) {
  return bytes * 8000 / tick_ms;
}

}  // namespace iotsdn
