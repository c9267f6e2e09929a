#include <cmath>
#include <stdexcept>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "scamlgp/rng.hpp"

using namespace scamlgp;

TEST_CASE("splitmix64 matches the published reference sequence") {
  // Reference values for the canonical splitmix64 with state 1.
  CHECK(splitmix64(1) == 10451216379200822465ull);
}

TEST_CASE("rng streams are frozen") {
  // Regression pins: any change to the generator alters every seeded result
  // in the project, so drift must be deliberate.
  Rng u32s(42);
  CHECK(u32s.next_u32() == 2715264132u);
  CHECK(u32s.next_u32() == 1124512371u);
  CHECK(u32s.next_u32() == 835027021u);
  CHECK(u32s.next_u32() == 2325617541u);

  Rng u64s(42);
  CHECK(u64s.next_u64() == 4829743860107682948ull);
  CHECK(u64s.next_u64() == 9988451282433966157ull);
  CHECK(u64s.next_u64() == 2027842558886176090ull);
  CHECK(u64s.next_u64() == 2166551336766238075ull);

  Rng uniforms(7);
  CHECK(uniforms.uniform() == doctest::Approx(0.5960467593531863).epsilon(1e-15));
  CHECK(uniforms.uniform() == doctest::Approx(0.33308204231759864).epsilon(1e-15));

  Rng normals(7);
  CHECK(normals.normal() == doctest::Approx(-0.67138022628940697).epsilon(1e-15));
  CHECK(normals.normal() == doctest::Approx(1.1671164848176176).epsilon(1e-15));

  Rng gammas(7);
  CHECK(gammas.gamma(3.0, 6.0) == doctest::Approx(0.28561568832573275).epsilon(1e-15));

  CHECK(Rng(42).derive(3).next_u64() == 9527840800773012546ull);
}

TEST_CASE("same seed same stream, different seed different stream") {
  Rng a(123), b(123), c(124);
  bool same = true, differ = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    same = same && (va == b.next_u64());
    differ = differ || (va != c.next_u64());
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("derived streams are independent of the parent and each other") {
  Rng root(5);
  Rng d1 = root.derive(1);
  Rng d2 = root.derive(2);
  // Deriving does not advance the parent.
  CHECK(root.next_u64() == Rng(5).next_u64());
  // Children disagree with each other and with the parent.
  CHECK(d1.next_u64() != d2.next_u64());
  CHECK(Rng(5).derive(1).next_u64() == Rng(5).derive(1).next_u64());
}

TEST_CASE("uniform stays inside its interval") {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-2.0, 3.0);
    CHECK(u >= -2.0);
    CHECK(u < 3.0);
  }
}

TEST_CASE("uniform moments") {
  Rng rng(13);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal moments") {
  Rng rng(17);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0, sumcube = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
    sumcube += z * z * z;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(1).scale(0.01));
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sumcube / n == doctest::Approx(0.0).epsilon(1).scale(0.05));
  Rng shifted(17);
  const double x = shifted.normal(3.0, 2.0);
  Rng base(17);
  CHECK(x == doctest::Approx(3.0 + 2.0 * base.normal()).epsilon(1e-15));
}

TEST_CASE("gamma moments for several shapes") {
  Rng rng(19);
  for (const double shape : {0.5, 1.0, 3.0, 8.0}) {
    const double rate = 2.0;
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gamma(shape, rate);
      CHECK(g > 0.0);
      sum += g;
      sumsq += g * g;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == doctest::Approx(shape / rate).epsilon(0.03));
    CHECK(var == doctest::Approx(shape / (rate * rate)).epsilon(0.08));
  }
}

TEST_CASE("uniform_int covers its range without obvious bias") {
  Rng rng(23);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const int k = rng.uniform_int(10);
    REQUIRE(k >= 0);
    REQUIRE(k < 10);
    counts[static_cast<std::size_t>(k)]++;
  }
  for (int c : counts) CHECK(std::abs(c - n / 10) < 600);  // ~6 sigma
  CHECK_THROWS_AS((void)rng.uniform_int(0), std::invalid_argument);
}

TEST_CASE("sample_without_replacement draws distinct indices") {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + rng.uniform_int(20);
    const int k = 1 + rng.uniform_int(n);
    const std::vector<int> sample = rng.sample_without_replacement(n, k);
    REQUIRE(static_cast<int>(sample.size()) == k);
    std::set<int> seen(sample.begin(), sample.end());
    CHECK(static_cast<int>(seen.size()) == k);
    for (int idx : sample) {
      CHECK(idx >= 0);
      CHECK(idx < n);
    }
  }
  CHECK_THROWS_AS((void)rng.sample_without_replacement(3, 4), std::invalid_argument);
}

TEST_CASE("full permutation visits every index uniformly enough") {
  // Position of element 0 across permutations of size 8 should be uniform.
  Rng rng(31);
  std::vector<int> position_counts(8, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const std::vector<int> perm = rng.sample_without_replacement(8, 8);
    for (int pos = 0; pos < 8; ++pos) {
      if (perm[static_cast<std::size_t>(pos)] == 0) position_counts[static_cast<std::size_t>(pos)]++;
    }
  }
  for (int c : position_counts) CHECK(std::abs(c - trials / 8) < 300);
}
