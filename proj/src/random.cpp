#include "netrecon/random.hpp"

namespace netrecon {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::string_view key,
                          std::uint64_t repetition) {
  std::uint64_t h = fnv1a(kFnvOffset, stage);
  h = fnv1a(h, std::string_view("\x1f", 1));
  h = fnv1a(h, key);
  h = splitmix64(h ^ splitmix64(repetition));
  return splitmix64(h ^ master);
}

}  // namespace netrecon
