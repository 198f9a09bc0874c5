#pragma once

#include <cstdint>
#include <random>

namespace crac {

/// Seeded 64-bit random source with portable (library-independent) draws.
///
/// The standard distributions are implementation-defined, so uniform doubles
/// are built directly from the top 53 bits of the engine output. Transcripts
/// therefore match across processes and standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  bool bernoulli(double p_true) { return uniform() < p_true; }

 private:
  std::mt19937_64 engine_;
};

/// Roles that draw from independent streams within one shard.
enum class StreamRole : std::uint64_t { Alice = 1, Bob = 2 };

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent stream for (seed, shard, role).
RandomStream derive_stream(std::uint64_t seed, std::uint64_t shard, StreamRole role);

}  // namespace crac
