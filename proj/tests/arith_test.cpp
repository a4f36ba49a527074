#include "shorcert/arith.hpp"

#include <gtest/gtest.h>

#include "shorcert/sim.hpp"

using namespace shorcert;

TEST(arith, mod_mult_table_examples) {
  const auto t = mod_mult_permutation(7, 15, 4);
  EXPECT_EQ(t(1), 7u);
  EXPECT_EQ(t(7), 4u);
  EXPECT_EQ(t(4), 13u);
  EXPECT_EQ(t(13), 1u);
  EXPECT_EQ(t(15), 15u);  // out-of-range inputs are fixed
  EXPECT_EQ(t.multiplier(), 7u);
  EXPECT_EQ(t.modulus(), 15u);

  const auto u = mod_mult_permutation(2, 21, 5);
  for (std::uint32_t x = 21; x < 32; ++x) EXPECT_EQ(u(x), x);
}

TEST(arith, mod_mult_table_is_a_bijection_that_multiplies) {
  for (u64 n : {15u, 21u, 33u, 35u}) {
    const unsigned w = ceil_log2(n);
    for (u64 a = 2; a < n; ++a) {
      if (gcd(a, n) != 1) continue;
      const auto t = mod_mult_permutation(a, n, w);
      for (std::uint32_t x = 0; x < t.size(); ++x)
        ASSERT_EQ(t(x), x < n ? x * a % n : x);
      EXPECT_EQ(t.inverse(), mod_mult_permutation(modular_inverse(a, n), n, w));
    }
  }
}

TEST(arith, mod_mult_errors) {
  try {
    mod_mult_permutation(5, 15, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_coprime);
  }
  try {
    mod_mult_permutation(2, 35, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::capacity);
  }
}

TEST(arith, controlled_power_table_is_repeated_composition) {
  for (auto [a, n] : {std::pair<u64, u64>{7, 15}, {2, 21}, {4, 35}, {8, 35}}) {
    const unsigned w = ceil_log2(n);
    const auto one = mod_mult_permutation(a, n, w);
    for (unsigned k = 0; k < 6; ++k) {
      const auto tk = controlled_power_table(a, n, k, w);
      const u64 reps = u64{1} << k;
      for (std::uint32_t x = 0; x < one.size(); ++x) {
        std::uint32_t v = x;
        for (u64 i = 0; i < reps; ++i) v = one(v);
        ASSERT_EQ(tk(x), v) << "a=" << a << " N=" << n << " k=" << k;
      }
    }
  }
  EXPECT_TRUE(controlled_power_table(7, 15, 2, 4).is_identity());
}

TEST(arith, plan_constants) {
  const auto p = make_plan(7, 15, 4);
  EXPECT_EQ(p.nbar, 1u);
  EXPECT_EQ(p.addends, (std::vector<u64>{7, 14, 13, 11}));
  // 7^{-1} = 13, -13 * 2^i mod 15
  EXPECT_EQ(p.unaddends, (std::vector<u64>{2, 4, 8, 1}));
}

TEST(arith, ripple_carry_adder_exhaustive) {
  for (unsigned n = 1; n <= 5; ++n) {
    const auto f = ripple_carry_adder(n);
    const u64 span = u64{1} << n;
    for (u64 a = 0; a < span; ++a) {
      for (u64 b = 0; b < span; ++b) {
        u64 in = a | (b << n);
        const u64 out = execute_basis(f.circuit, in);
        ASSERT_EQ(out & (span - 1), a) << "n=" << n;
        ASSERT_EQ((out >> n) & ((span << 1) - 1), a + b) << "n=" << n << " a=" << a << " b=" << b;
        ASSERT_EQ(out >> (2 * n + 1), 0u) << "carry ancilla dirty";
      }
    }
  }
}

TEST(arith, ripple_carry_adder_subtracts_when_inverted) {
  const unsigned n = 4;
  const auto f = ripple_carry_adder(n);
  const Circuit sub = f.circuit.adjoint();
  for (u64 a = 0; a < 16; ++a)
    for (u64 b = 0; b < 32; ++b) {
      const u64 out = execute_basis(sub, a | (b << n));
      ASSERT_EQ((out >> n) & 31, (b + 32 - a) % 32);
    }
}

// Oracle: the permutation table. The gate-level multiplier must agree on
// every basis input of the work register, for both control values, and
// return all ancillas to zero.
TEST(arith, multiplier_matches_table_on_every_basis_input) {
  for (u64 n : {15u, 21u, 35u}) {
    const unsigned w = ceil_log2(n);
    for (u64 a = 2; a < n; ++a) {
      if (gcd(a, n) != 1) continue;
      const auto f = modular_multiplier_circuit(a, n, w);
      const auto table = mod_mult_permutation(a, n, w);
      for (u64 control = 0; control <= 1; ++control) {
        for (u64 x = 0; x < (u64{1} << w); ++x) {
          const u64 out = execute_basis(f.circuit, control | (x << 1));
          const u64 expect = control ? table(static_cast<std::uint32_t>(x)) : x;
          ASSERT_EQ(out & 1, control);
          ASSERT_EQ((out >> 1) & ((u64{1} << w) - 1), expect)
              << "N=" << n << " a=" << a << " x=" << x << " ctl=" << control;
          ASSERT_EQ(out >> (1 + w), 0u) << "ancilla dirty: N=" << n << " a=" << a << " x=" << x;
        }
      }
    }
  }
}

TEST(arith, multiplier_with_unit_multiplier_is_identity) {
  const auto f = modular_multiplier_circuit(1, 15, 4);
  for (u64 x = 0; x < 32; ++x) EXPECT_EQ(execute_basis(f.circuit, x), x);
}

TEST(arith, multiplier_register_budget) {
  for (u64 n : {15u, 21u, 35u}) {
    const unsigned w = ceil_log2(n);
    const auto f = modular_multiplier_circuit(2, n, w);
    EXPECT_EQ(f.circuit.qubit_count(), 1 + w + MultiplierWiring::ancilla_count(w));
    EXPECT_EQ(f.wiring.ancillas().size(), 2u * w + 5);
  }
}
