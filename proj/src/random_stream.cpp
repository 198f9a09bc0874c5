#include "crac/random_stream.hpp"

namespace crac {

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
  double u = 0.0;
  while (u == 0.0) u = uniform();
  return u;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream derive_stream(std::uint64_t seed, std::uint64_t shard, StreamRole role) {
  const std::uint64_t s = mix64(mix64(mix64(seed) ^ shard) ^ static_cast<std::uint64_t>(role));
  return RandomStream(s);
}

}  // namespace crac
