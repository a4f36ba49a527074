#include "shorcert/noise.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shorcert/cert.hpp"
#include "shorcert/sim.hpp"

using namespace shorcert;

namespace {

double sum(const std::vector<double>& p) {
  double s = 0;
  for (double v : p) s += v;
  return s;
}

std::vector<u64> local_maxima(const std::vector<double>& p) {
  std::vector<u64> out;
  const std::size_t n = p.size();
  for (std::size_t x = 0; x < n; ++x)
    if (p[x] > p[(x + n - 1) % n] && p[x] >= p[(x + 1) % n]) out.push_back(x);
  return out;
}

}  // namespace

TEST(noise, stable_eigenphases_examples) {
  EXPECT_EQ(stable_eigenphases(4, false), (std::vector<Eigenphase>{{0, 4}, {2, 4}}));
  EXPECT_EQ(stable_eigenphases(6, true), (std::vector<Eigenphase>{{3, 6}}));
  EXPECT_EQ(stable_eigenphases(6, false), (std::vector<Eigenphase>{{0, 6}, {3, 6}}));
  EXPECT_EQ(stable_eigenphases(2, false), (std::vector<Eigenphase>{{0, 2}, {1, 2}}));
  EXPECT_EQ(stable_eigenphases(1, false), (std::vector<Eigenphase>{{0, 1}}));
  EXPECT_TRUE(stable_eigenphases(3, true).empty());
  // Two kept bits admit quarter phases.
  EXPECT_EQ(stable_eigenphases(4, true, 2), (std::vector<Eigenphase>{{1, 4}, {2, 4}, {3, 4}}));
}

// Oracle: s/r is stable iff truncating it to one fractional bit returns it
// unchanged, checked on the binary expansion in exact integers.
TEST(noise, stable_eigenphases_match_truncation_fixed_points) {
  for (u64 r = 1; r <= 40; ++r) {
    std::vector<Eigenphase> expect;
    for (u64 s = 0; s < r; ++s) {
      const u64 first_bit = (2 * s) / r;  // floor(2 s / r)
      // truncated value first_bit / 2 equals s / r  <=>  first_bit * r == 2 s
      if (first_bit * r == 2 * s) expect.push_back({s, r});
    }
    EXPECT_EQ(stable_eigenphases(r, false), expect) << "r=" << r;
  }
}

TEST(noise, single_lobe_for_order_six) {
  const auto spec = NoiseSpec::truncation(1, true);
  const auto p = truncated_phase_distribution(6, 11, spec);
  ASSERT_EQ(p.size(), 2048u);
  EXPECT_NEAR(sum(p), 1.0, 1e-12);
  EXPECT_EQ(truncation_lobe_centers(6, 11, spec), (std::vector<double>{1024.0}));
  EXPECT_EQ(std::max_element(p.begin(), p.end()) - p.begin(), 1024);
  for (u64 d = 1; d < 1024; ++d) ASSERT_NEAR(p[1024 + d], p[1024 - d], 1e-12) << d;
  EXPECT_EQ(local_maxima(p), (std::vector<u64>{1024}));
  for (double v : p) EXPECT_GE(v, 0.0);
  // Lobe shape cos^2(pi (x - 1024) / 2048), normalized: sum cos^2 = L / 2.
  for (u64 x : {0u, 512u, 1024u, 1500u})
    EXPECT_NEAR(p[x], std::pow(std::cos(std::numbers::pi * (x - 1024.0) / 2048), 2) / 1024, 1e-15);
}

TEST(noise, order_four_has_two_lobes) {
  const auto spec = NoiseSpec::truncation(1, false);
  EXPECT_EQ(truncation_lobe_centers(4, 9, spec), (std::vector<double>{0.0, 256.0}));
  const auto p = truncated_phase_distribution(4, 9, spec);
  EXPECT_NEAR(sum(p), 1.0, 1e-12);
  // Each lobe separately peaks at its centre; the zero lobe wraps.
  const auto zero = cos2_lobe(0.0, 9);
  const auto half = cos2_lobe(256.0, 9);
  EXPECT_EQ(local_maxima(zero), (std::vector<u64>{0}));
  EXPECT_EQ(local_maxima(half), (std::vector<u64>{256}));
  EXPECT_NEAR(zero[511], zero[1], 1e-15);
  // cos^2 + sin^2: lobes half a period apart sum to a flat mixture.
  for (u64 x = 0; x < 512; ++x) ASSERT_NEAR(p[x], 0.5 * (zero[x] + half[x]), 1e-15);
  for (u64 x = 0; x < 512; ++x) ASSERT_NEAR(p[x], 1.0 / 512, 1e-15);
}

TEST(noise, trivial_order_has_lobe_at_zero) {
  const auto p = truncated_phase_distribution(1, 6, NoiseSpec::truncation());
  EXPECT_EQ(local_maxima(p), (std::vector<u64>{0}));
}

TEST(noise, degenerate_model_error) {
  try {
    truncated_phase_distribution(3, 8, NoiseSpec::truncation(1, true));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_model);
  }
  EXPECT_THROW(truncated_phase_distribution(4, 8, NoiseSpec::uniform(0.3)), Error);
}

TEST(noise, uniform_mixing) {
  const auto p = ideal_qpe_distribution(4, 9);
  EXPECT_EQ(mix_with_uniform(p, 0.0), p);
  for (double v : mix_with_uniform(p, 1.0)) EXPECT_DOUBLE_EQ(v, 1.0 / 512);
  const auto w = acceptance_set(512, 4, WindowMode::strict);
  EXPECT_NEAR(window_mass(mix_with_uniform(p, 0.5), w), 0.625, 1e-12);
  EXPECT_THROW(mix_with_uniform(p, 1.5), Error);
}

TEST(noise, window_mass_is_affine_in_lambda) {
  for (auto [r, t] : {std::pair<u64, unsigned>{6, 11}, {4, 10}, {5, 9}}) {
    const auto p = ideal_qpe_distribution(r, t);
    const auto w = acceptance_set(u64{1} << t, r, WindowMode::strict);
    const double m0 = window_mass(p, w), b = baseline(w);
    for (double lambda : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) {
      const auto q = mix_with_uniform(p, lambda);
      EXPECT_NEAR(sum(q), 1.0, 1e-12);
      EXPECT_NEAR(window_mass(q, w), (1 - lambda) * m0 + lambda * b, 1e-12);
    }
  }
}

TEST(noise, spec_parsing_round_trip) {
  EXPECT_EQ(NoiseSpec::parse("none").kind, NoiseSpec::Kind::none);
  const auto t = NoiseSpec::parse("trunc:1,nozero");
  EXPECT_EQ(t.kind, NoiseSpec::Kind::phase_truncation);
  EXPECT_TRUE(t.exclude_zero_phase);
  EXPECT_EQ(t.str(), "trunc:1,nozero");
  EXPECT_EQ(NoiseSpec::parse("trunc:2").kept_bits, 2u);
  EXPECT_DOUBLE_EQ(NoiseSpec::parse("uniform:0.25").lambda, 0.25);
  EXPECT_EQ(NoiseSpec::parse(NoiseSpec::parse("uniform:0.25").str()).lambda, 0.25);
  for (const char* bad : {"uniform:1.5", "uniform:x", "trunc:0", "trunc:1,zero", "gauss:1", "trunc:1x"}) {
    try {
      NoiseSpec::parse(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::config) << bad;
    }
  }
}

TEST(noise, apply_noise_dispatch) {
  const auto p = ideal_qpe_distribution(6, 11);
  EXPECT_EQ(apply_noise(p, 6, 11, NoiseSpec::none()), p);
  EXPECT_EQ(apply_noise(p, 6, 11, NoiseSpec::truncation(1, true)),
            truncated_phase_distribution(6, 11, NoiseSpec::truncation(1, true)));
}

// Truncation leaves less window mass than the ideal spectrum.
TEST(noise, truncation_reduces_window_mass) {
  const auto w = acceptance_set(2048, 6, WindowMode::inclusive);
  const double ideal = window_mass(ideal_qpe_distribution(6, 11), w);
  const double trunc = window_mass(truncated_phase_distribution(6, 11, NoiseSpec::truncation(1, true)), w);
  EXPECT_LT(trunc, ideal);
  EXPECT_GT(trunc, baseline(w));
}
