#include <doctest.h>

#include "loscap/rng.hpp"

using loscap::Rng;

TEST_CASE("rng is deterministic per seed") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 1000; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
  }
  CHECK(a.next_u64() != c.next_u64());
}

TEST_CASE("uniform stays in [0,1) and looks uniform") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal has roughly unit variance") {
  Rng rng(11);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(s / n == doctest::Approx(0.0).epsilon(0.02));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("forked streams differ from parent and each other") {
  Rng root(5);
  Rng f0 = root.fork(0), f1 = root.fork(1);
  CHECK(f0.next_u64() != f1.next_u64());
  Rng g0 = root.fork(0);
  g0.next_u64();
  CHECK(g0.next_u64() == [&] { Rng h = root.fork(0); h.next_u64(); return h.next_u64(); }());
}
