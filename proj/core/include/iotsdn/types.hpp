#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>

namespace iotsdn {

using Tick = std::int64_t;
using BitsPerSecond = std::int64_t;
using Bytes = std::int64_t;

inline constexpr Tick kForever = std::numeric_limits<Tick>::max();

// Switch traffic classes. Tc0 carries low-priority traffic (all IoT flows are
// native here), Tc1 mid-priority and Tc2 high-priority background traffic.
enum class TrafficClass : int { Tc0 = 0, Tc1 = 1, Tc2 = 2 };

inline constexpr int kNumTrafficClasses = 3;

template <typename T>
using PerClass = std::array<T, kNumTrafficClasses>;

constexpr int tc_index(TrafficClass tc) { return static_cast<int>(tc); }
constexpr TrafficClass tc_from_index(int i) {
  return static_cast<TrafficClass>(i);
}

inline constexpr PerClass<TrafficClass> kTrafficClasses = {
    TrafficClass::Tc0, TrafficClass::Tc1, TrafficClass::Tc2};

std::string to_string(TrafficClass tc);

// Per-topic QoS level at the aggregators; 0 is the highest priority.
using QosLevel = int;
inline constexpr int kNumQosLevels = 3;

// Bandwidth-constraint fraction stored in parts per million so per-class
// limits stay integral and ledger invariants hold exactly.
struct Fraction {
  std::int64_t ppm = 0;

  static Fraction from_double(double value);

  BitsPerSecond of(BitsPerSecond capacity) const {
    return capacity * ppm / 1'000'000;
  }

  double as_double() const { return static_cast<double>(ppm) / 1e6; }

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// Round-half-to-even conversion from a real-valued rate to integer bits/s.
BitsPerSecond round_half_even(double rate);

// floor(rate * tick_ms / 8000): bytes transferable in one tick at `rate`.
Bytes bytes_per_tick(BitsPerSecond rate, int tick_ms);

// bytes * 8000 / tick_ms: the rate corresponding to a per-tick byte count.
BitsPerSecond rate_from_bytes(Bytes bytes, int tick_ms);

}  // namespace iotsdn
