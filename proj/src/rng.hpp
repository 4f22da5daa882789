#pragma once

#include <cstdint>
#include <random>

namespace dane {

/* Deterministic random source.
 *
 * Every random decision in the project draws from a stream keyed by
 * (master seed, purpose, machine, round).  Streams are derived with a
 * splitmix64 finalizer and fed to std::mt19937_64, whose output sequence is
 * pinned by the standard, so a given key yields the same draws on every
 * platform and regardless of which thread executes the work.
 *
 * Gaussian and bounded-integer draws are implemented here instead of with
 * std::normal_distribution / std::uniform_int_distribution because the
 * standard leaves those distributions implementation-defined.
 */
class Rng {
 public:
  enum class Purpose : std::uint64_t {
    kDataGen = 1,    // synthetic feature/noise draws
    kPartition = 2,  // shard permutation
    kHoldout = 3,    // holdout set seed derivation
    kSubset = 4,     // per-round subset draws (limited access modes)
    kLocalStep = 5,  // stochastic step sampling (SGD/SVRG inner loops)
  };

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t master, Purpose purpose, std::uint64_t machine,
                    std::uint64_t round);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1), 53 random bits.
  double next_unit();

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double next_gaussian();

  // Uniform on [0,n), unbiased (Lemire rejection).
  std::size_t next_index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double cached_gaussian_ = 0.0;
  bool has_cached_ = false;
};

// splitmix64 finalizer, also used on its own to derive sub-seeds.
std::uint64_t mix64(std::uint64_t z);

}  // namespace dane
