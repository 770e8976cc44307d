// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gesturegen/nn/rng.hpp"

using gesturegen::nn::Rng;

TEST_CASE("rng streams are reproducible per seed") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    double va = a.uniform(), vb = b.uniform(), vc = c.uniform();
    all_equal = all_equal && va == vb;
    any_diff = any_diff || va != vc;
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("reseed replays the stream from the start") {
  Rng r(7);
  std::vector<double> first;
  for (int i = 0; i < 50; ++i) first.push_back(r.gaussian());
  r.reseed(7);
  for (int i = 0; i < 50; ++i) CHECK(r.gaussian() == first[i]);
}

TEST_CASE("uniform stays in range and fills it") {
  Rng r(1);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double v = r.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);

  for (int i = 0; i < 1000; ++i) {
    double v = r.uniform(-3.0, 5.0);
    CHECK(v >= -3.0);
    CHECK(v < 5.0);
  }
}

TEST_CASE("gaussian moments look standard normal") {
  Rng r(2);
  int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = r.gaussian();
    sum += v;
    sum2 += v * v;
  }
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("uniform_int covers [0, n) roughly evenly") {
  Rng r(3);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 50000; ++i) {
    uint64_t v = r.uniform_int(10);
    REQUIRE(v < 10);
    ++counts[static_cast<int>(v)];
  }
  for (int c : counts) {
    CHECK(c > 4500);
    CHECK(c < 5500);
  }
}

TEST_CASE("shuffle permutes without losing elements") {
  Rng r(4);
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[i] = i;
  std::vector<int> orig = v;
  r.shuffle(v);
  CHECK(v != orig);  // astronomically unlikely to be identity
  std::sort(v.begin(), v.end());
  CHECK(v == orig);
}
