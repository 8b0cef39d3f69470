#include "ddf/rng.hpp"

namespace ddf {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t k = splitmix(seed);
  k = splitmix(k ^ a);
  k = splitmix(k ^ (b + 0x632be59bd9b4e019ULL));
  k = splitmix(k ^ (c + 0x8cb92ba72f3d8dd7ULL));
  return k;
}

}  // namespace ddf
