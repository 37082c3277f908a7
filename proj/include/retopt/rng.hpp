#pragma once

#include <cmath>
#include <cstdint>

namespace retopt {

// SplitMix64 step: advances the state and returns a mixed output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with per-(seed, stream) substreams. The substream state is
// derived by running SplitMix64 from seed XOR mix(stream), so adjacent
// stream indices share no state words. Streams map to simulated years,
// making every year independently reproducible.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t k = stream;
    std::uint64_t s = seed ^ splitmix64_next(k);
    for (auto& word : s_) word = splitmix64_next(s);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Poisson sample: sequential-search inversion for mean < 10, Hörmann's PTRS
// transformed rejection above (rates per severity cell are tiny under the
// rare-event hypothesis, but merged-cell tests need large rates).
std::int64_t poisson_sample(Xoshiro256pp& rng, double mean);

}  // namespace retopt
