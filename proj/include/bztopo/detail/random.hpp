#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace bztopo::detail {

// mt19937_64 with raw bits mapped straight to doubles.  The standard
// distributions are implementation-defined, so they are avoided here:
// the same seed must yield the same stream on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1), 53 mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

  std::complex<double> complex_symmetric() {
    double re = symmetric();
    double im = symmetric();
    return {re, im};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bztopo::detail
