#pragma once

#include <cstdint>
#include <random>

namespace gqn {

/// Deterministic replicate stream: the engine seed is a pure function of
/// (master_seed, replicate_index, stream_tag), so replicates are independent
/// and reproducible regardless of scheduling.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
  std::uint64_t stream_tag = 0;

  SeedSpec with_tag(std::uint64_t tag) const {
    return SeedSpec{master_seed, replicate_index, tag};
  }
  SeedSpec with_replicate(std::uint64_t rep) const {
    return SeedSpec{master_seed, rep, stream_tag};
  }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(const SeedSpec& s) {
  std::uint64_t h = splitmix64(s.master_seed);
  h = splitmix64(h ^ (s.replicate_index + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ (s.stream_tag + 0x9e3779b97f4a7c15ULL));
  return h;
}

inline std::mt19937_64 make_engine(const SeedSpec& s) {
  return std::mt19937_64(derive_stream_seed(s));
}

}  // namespace gqn
