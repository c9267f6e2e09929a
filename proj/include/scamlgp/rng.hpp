#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace scamlgp {

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based pseudo-random generator (Philox 4x32-10).
//
// Child streams derived via derive(id) depend only on the (seed, id) chain,
// never on draw order, so independent tasks can consume their own streams
// concurrently while the whole experiment stays bitwise reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  // Independent child stream. Identical (seed, id) pairs give identical
  // streams; distinct ids give decorrelated ones.
  Rng derive(std::uint64_t id) const;

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // standard normal, Box-Muller
  double normal(double mean, double stddev);
  // Gamma(shape, rate) via Marsaglia-Tsang squeeze; shape, rate > 0.
  double gamma(double shape, double rate);

  int uniform_int(int n);  // uniform over {0, ..., n-1}
  // First k entries of a Fisher-Yates shuffle of {0, ..., n-1}.
  std::vector<int> sample_without_replacement(int n, int k);

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  void refill();

  std::uint64_t seed_ = 0;
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace scamlgp
