#include "rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dane {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Rng Rng::stream(std::uint64_t master, Purpose purpose, std::uint64_t machine,
                std::uint64_t round) {
  std::uint64_t s = master;
  s = mix64(s + kGolden * static_cast<std::uint64_t>(purpose));
  s = mix64(s + kGolden * (machine + 1));
  s = mix64(s + kGolden * (round + 1));
  return Rng(s);
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_gaussian_;
  }
  // u1 in (0,1] keeps log finite; u2 in [0,1).
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  cached_gaussian_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

std::size_t Rng::next_index(std::size_t n) {
  if (n == 0) throw std::logic_error("Rng::next_index: n must be positive");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  unsigned __int128 m =
      static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(bound);
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(bound);
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

}  // namespace dane
