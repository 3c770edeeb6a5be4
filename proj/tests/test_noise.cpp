#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "noise.hpp"

using namespace slb;

TEST_CASE("philox 4x32-10 known-answer vectors") {
  const auto zeros = philox::block({0, 0, 0, 0}, {0, 0});
  CHECK(zeros[0] == 0x6627e8d5u);
  CHECK(zeros[1] == 0xe169c58du);
  CHECK(zeros[2] == 0xbc57ac4cu);
  CHECK(zeros[3] == 0x9b00dbd8u);
  const auto ones = philox::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                  {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("streams replay bit-exactly and differ across indices") {
  GaussianStream a(1234, StreamLayer::bath, 7);
  GaussianStream b(1234, StreamLayer::bath, 7);
  GaussianStream c(1234, StreamLayer::bath, 8);
  GaussianStream d(1234, StreamLayer::born_position, 7);
  bool all_equal_c = true, all_equal_d = true;
  for (int i = 0; i < 1000; ++i) {
    const double xa = a.normal();
    CHECK(xa == b.normal());
    if (xa != c.normal()) all_equal_c = false;
    if (xa != d.normal()) all_equal_d = false;
  }
  CHECK(!all_equal_c);
  CHECK(!all_equal_d);
}

TEST_CASE("distinct streams are uncorrelated") {
  const int n = 100000;
  GaussianStream a(99, StreamLayer::bath, 0);
  GaussianStream b(99, StreamLayer::bath, 1);
  double sxy = 0;
  for (int i = 0; i < n; ++i) sxy += a.normal() * b.normal();
  CHECK(std::abs(sxy / n) < 4.0 / std::sqrt((double)n));
}

TEST_CASE("impulses vanish without friction or bath temperature") {
  PhysicalParams p;
  p.friction = 0.0;
  p.kb_temp = 0.5;
  NoiseStream s1(p, 0.01, 42, 0);
  p.friction = 0.2;
  p.kb_temp = 0.0;
  NoiseStream s2(p, 0.01, 42, 0);
  for (int i = 0; i < 100; ++i) {
    CHECK(s1.sample_impulse() == 0.0);
    CHECK(s2.sample_impulse() == 0.0);
  }
}

TEST_CASE("impulse mean and variance match the fluctuation scaling") {
  PhysicalParams p;
  p.friction = 0.2;
  p.kb_temp = 0.5;
  const double dt = 0.01;
  // independent oracle: variance = 2 m gamma k_B T dt
  const double var_expected = 2.0 * p.mass * p.friction * p.kb_temp * dt;
  NoiseStream s(p, dt, 2024, 0);
  const int n = 1000000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = s.sample_impulse();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(var_expected) / 1000.0);
  CHECK(var == doctest::Approx(var_expected).epsilon(0.01));
  CHECK(var_expected == doctest::Approx(2e-3));
}

TEST_CASE("velocity sampler: delta limit and variance") {
  VelocitySampler zero(0.0, 1.0, 7);
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(zero.sample(i) == 0.0);

  VelocitySampler unit(1.0, 1.0, 7);
  const int n = 1000000;
  double sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = unit.sample((std::uint64_t)i);
    sum2 += v * v;
  }
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));

  VelocitySampler half(0.5, 1.0, 8);
  sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = half.sample((std::uint64_t)i);
    sum2 += v * v;
  }
  CHECK(sum2 / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("born positions have the packet mean and width") {
  const int n = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_born_position(3.0, 0.5, 11, (std::uint64_t)i);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(3.0).epsilon(0.001));
  CHECK(sum2 / n - mean * mean == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("kolmogorov-smirnov at the 1% level") {
  const int n = 100000;
  std::vector<double> x(n);
  GaussianStream g(31337, StreamLayer::bath, 3);
  for (int i = 0; i < n; ++i) x[i] = g.normal();
  std::sort(x.begin(), x.end());
  auto phi = [](double v) { return 0.5 * std::erfc(-v / std::sqrt(2.0)); };
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = phi(x[i]);
    d = std::max(d, std::abs(f - (double)(i + 1) / n));
    d = std::max(d, std::abs(f - (double)i / n));
  }
  const double stat = d * (std::sqrt((double)n) + 0.12 + 0.11 / std::sqrt((double)n));
  CHECK(stat < 1.628);  // 1% critical value
}
