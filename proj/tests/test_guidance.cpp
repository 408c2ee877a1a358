#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "auhead/error.hpp"
#include "auhead/guidance.hpp"
#include "support/oracles.hpp"

using namespace auhead;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST(Guidance, ScalarFixture) {
  const std::vector<double> nn{0.2}, hn{0.3}, na{0.1}, ha{0.5};
  const auto out = disentangled_combine(GuidanceInputs{nn, hn, na, ha, 1.0, 2.0});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0], 0.6, 1e-12);
}

TEST(Guidance, EqualInputsAreReturnedBitForBit) {
  std::mt19937_64 rng(1);
  const auto v = random_vector(rng, 257);
  for (double s_h : {0.0, 1.0, 2.5}) {
    for (double s_au : {0.0, 3.5, 7.25}) {
      const auto out = disentangled_combine(GuidanceInputs{v, v, v, v, s_h, s_au});
      EXPECT_EQ(0, std::memcmp(out.data(), v.data(), v.size() * sizeof(double)));
    }
  }
}

TEST(Guidance, ZeroScalesGiveNullAu) {
  std::mt19937_64 rng(2);
  const auto a = random_vector(rng, 33), b = random_vector(rng, 33), c = random_vector(rng, 33),
             d = random_vector(rng, 33);
  EXPECT_EQ(disentangled_combine(GuidanceInputs{a, b, c, d, 0.0, 0.0}), c);
}

TEST(Guidance, DefaultsAndHomogeneity) {
  GuidanceInputs in;
  EXPECT_EQ(in.s_au, 3.5);
  EXPECT_EQ(in.s_h, 1.0);
  std::mt19937_64 rng(3);
  const auto a = random_vector(rng, 64), b = random_vector(rng, 64), c = random_vector(rng, 64),
             d = random_vector(rng, 64);
  const auto base = disentangled_combine(GuidanceInputs{a, b, c, d, 1.3, 2.1});
  auto scale = [](std::vector<double> v) {
    for (auto& x : v) x *= 3.0;
    return v;
  };
  const auto scaled = disentangled_combine(GuidanceInputs{scale(a), scale(b), scale(c), scale(d), 1.3, 2.1});
  for (std::size_t k = 0; k < base.size(); ++k) EXPECT_NEAR(scaled[k], 3.0 * base[k], 1e-12 * (1 + std::abs(base[k])));
}

TEST(Guidance, ReducesToCfgWhenAuHasNoEffect) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_vector(rng, 1 + trial * 7);
    const auto c = random_vector(rng, u.size());
    const double s = trial * 0.05;
    const auto dis = disentangled_combine(GuidanceInputs{u, c, u, c, s, 2.0});
    EXPECT_EQ(dis, cfg_combine(u, c, s));
  }
}

TEST(Guidance, CfgSpecialCases) {
  const std::vector<double> u{1.0, -2.0}, c{0.5, 4.0};
  EXPECT_EQ(cfg_combine(u, c, 0.0), u);
  EXPECT_EQ(cfg_combine(u, c, 1.0), c);
  EXPECT_EQ(cfg_combine(u, u, 9.0), u);
  const std::vector<float> uf{1.0f}, cf{3.0f};
  EXPECT_EQ(cfg_combine(uf, cf, 0.5f)[0], 2.0f);
}

TEST(Guidance, MatchesScalarLoopOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> scale(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_vector(rng, 1024), b = random_vector(rng, 1024), c = random_vector(rng, 1024),
               d = random_vector(rng, 1024);
    const double s_h = scale(rng), s_au = scale(rng);
    const auto out = disentangled_combine(GuidanceInputs{a, b, c, d, s_h, s_au});
    const auto ref = oracle::guidance_loop(a, b, c, d, s_h, s_au);
    for (std::size_t k = 0; k < out.size(); ++k) {
      EXPECT_LE(std::abs(out[k] - ref[k]), 1e-6 * std::max(1.0, std::abs(ref[k])));
    }
  }
}

TEST(Guidance, Float32Path) {
  const std::vector<float> nn{0.2f}, hn{0.3f}, na{0.1f}, ha{0.5f};
  const auto out = disentangled_combine(GuidanceInputsF32{nn, hn, na, ha, 1.0f, 2.0f});
  EXPECT_NEAR(out[0], 0.6f, 1e-6f);
}

TEST(Guidance, Validation) {
  const std::vector<double> a{1.0, 2.0}, b{1.0};
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  EXPECT_EQ(kind([&] { disentangled_combine(GuidanceInputs{a, a, b, a, 1.0, 1.0}); }), ErrorKind::ShapeMismatch);
  const std::vector<double> empty;
  EXPECT_EQ(kind([&] { disentangled_combine(GuidanceInputs{empty, empty, empty, empty, 1.0, 1.0}); }),
            ErrorKind::ShapeMismatch);
  EXPECT_EQ(kind([&] { disentangled_combine(GuidanceInputs{a, a, a, a, -1.0, 1.0}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind([&] { disentangled_combine(GuidanceInputs{a, a, a, a, 1.0, NAN}); }), ErrorKind::InvalidArgument);
  const std::vector<double> bad{1.0, INFINITY};
  EXPECT_EQ(kind([&] { disentangled_combine(GuidanceInputs{a, bad, a, a, 1.0, 1.0}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind([&] { cfg_combine(a, b, 1.0); }), ErrorKind::ShapeMismatch);
  std::vector<double> out(3);
  EXPECT_EQ(kind([&] { disentangled_combine(GuidanceInputs{a, a, a, a, 1.0, 1.0}, out); }), ErrorKind::ShapeMismatch);
}
