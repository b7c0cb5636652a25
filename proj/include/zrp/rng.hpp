#pragma once

#include <cmath>
#include <cstdint>

namespace zrp {

// Counter-based generator: output n is a bijective mix of key + n*gamma
// (splitmix64 finalizer).  Streams split by (seed, stream) are independent
// and replicas are reproducible regardless of scheduling.
struct CounterRng {
  std::uint64_t key = 0;
  std::uint64_t ctr = 0;

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static CounterRng seeded(std::uint64_t seed, std::uint64_t stream = 0) {
    CounterRng r;
    r.key = mix(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
    return r;
  }

  std::uint64_t next() { return mix(key + 0x9E3779B97F4A7C15ULL * (++ctr)); }

  // uniform on (0,1), never returns an endpoint
  double uniform() {
    return (double(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  long uniform_long(long n) {  // [0, n)
    return long(double(n) * uniform());
  }
};

}  // namespace zrp
