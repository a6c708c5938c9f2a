#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sqpt/basis.hpp"
#include "sqpt/errors.hpp"
#include "sqpt/measure.hpp"

namespace sqpt {
namespace {

QuantumChannel bit_flip(double p) {
  const std::array<double, 1> params{p};
  return preset_channel("bit-flip", params, 2);
}

TEST(ExactExpectation, FrozenExamples) {
  const auto id = preset_channel("identity", {}, 2);
  EXPECT_NEAR(exact_expectation(id, projector_setting(basis_vector(0, 2), basis_vector(0, 2))).value, 1.0,
              1e-15);
  EXPECT_NEAR(
      exact_expectation(bit_flip(0.25), projector_setting(basis_vector(0, 2), basis_vector(1, 2))).value,
      0.25, 1e-15);
  const auto plus = superposition_states(0, 1, 2).first;
  const auto outcome = exact_expectation(id, hermitian_setting(plus, sud_generators(2).operators()[1]));
  EXPECT_NEAR(outcome.value, 1.0, 1e-15);
  EXPECT_EQ(outcome.std_error, 0.0);
  EXPECT_EQ(outcome.shots, 0u);
}

TEST(ExactExpectation, DimensionMismatch) {
  const auto id = preset_channel("identity", {}, 3);
  EXPECT_THROW(exact_expectation(id, projector_setting(basis_vector(0, 2), basis_vector(0, 2))),
               DimensionError);
}

TEST(Settings, ValidateInputs) {
  ComplexVector not_unit = 2.0 * basis_vector(0, 2);
  EXPECT_THROW(projector_setting(not_unit, basis_vector(0, 2)), ArgumentError);
  ComplexMatrix non_herm = choi_op({0, 1, 2});
  EXPECT_THROW(hermitian_setting(basis_vector(0, 2), non_herm), ArgumentError);
}

TEST(SampledExpectation, ZeroProbabilityGivesZero) {
  const auto id = preset_channel("identity", {}, 2);
  const auto s = projector_setting(basis_vector(0, 2), basis_vector(1, 2));
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const auto o = sampled_expectation(id, s, BackendConfig::sampled(1000, seed));
    EXPECT_EQ(o.value, 0.0);
    EXPECT_EQ(o.std_error, 0.0);
    EXPECT_EQ(o.shots, 1000u);
  }
}

TEST(SampledExpectation, ConcentratesAroundExact) {
  const auto s = projector_setting(basis_vector(0, 2), basis_vector(1, 2));
  const auto o = sampled_expectation(bit_flip(0.25), s, BackendConfig::sampled(1'000'000, 42));
  EXPECT_NEAR(o.value, 0.25, 5.0 * std::sqrt(0.25 * 0.75 / 1e6));
  EXPECT_NEAR(o.std_error, std::sqrt(0.25 * 0.75 / 1e6), 1e-5);
}

TEST(SampledExpectation, Deterministic) {
  const auto ch = random_cptp(3, 2, 3);
  const auto s = projector_setting(superposition_states(0, 2, 3).second, basis_vector(1, 3));
  const auto cfg = BackendConfig::sampled(5000, 7);
  const auto a = sampled_expectation(ch, s, cfg);
  const auto b = sampled_expectation(ch, s, cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  const auto c = sampled_expectation(ch, s, BackendConfig::sampled(5000, 8));
  EXPECT_NE(a.value, c.value);
}

TEST(SampledExpectation, HermitianObservableUsesEigenbasis) {
  std::mt19937_64 rng(4);
  const auto ch = random_cptp(rng(), 2, 2);
  const auto z = sud_generators(2).operators()[3];
  const auto s = hermitian_setting(testing::random_state(rng, 2), z);
  const auto exact = exact_expectation(ch, s).value;
  const auto o = sampled_expectation(ch, s, BackendConfig::sampled(1'000'000, 5));
  EXPECT_GT(o.std_error, 0.0);
  EXPECT_NEAR(o.value, exact, 5.0 * o.std_error);
}

TEST(SampledExpectation, RejectsNonPhysicalProbabilities) {
  const QuantumChannel amplifying(2, {1.5 * ComplexMatrix::Identity(2, 2)});
  const auto s = projector_setting(basis_vector(0, 2), basis_vector(0, 2));
  EXPECT_THROW(sampled_expectation(amplifying, s, BackendConfig::sampled(10, 1)), PhysicalityError);
  EXPECT_THROW(sampled_expectation(amplifying, s, BackendConfig::exact()), ArgumentError);
  EXPECT_THROW(sampled_expectation(bit_flip(0.1), s, BackendConfig::sampled(0, 1)), ArgumentError);
}

TEST(SampledExpectation, AgreesWithExactForRandomSettings) {
  std::mt19937_64 rng(2024);
  int inside = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const std::size_t dim = t % 2 == 0 ? 2 : 4;
    const auto ch = random_cptp(rng(), 2, dim);
    const auto s = projector_setting(testing::random_state(rng, dim), testing::random_state(rng, dim));
    const auto exact = exact_expectation(ch, s).value;
    const auto o = sampled_expectation(ch, s, BackendConfig::sampled(1'000'000, rng()));
    if (std::abs(o.value - exact) < 5.0 * o.std_error) ++inside;
  }
  EXPECT_GE(inside, 198);
}

TEST(SettingSeed, DependsOnlyOnRoundedSetting) {
  const auto s = projector_setting(basis_vector(0, 2), basis_vector(1, 2));
  ComplexVector nudged = basis_vector(0, 2);
  nudged(0) = Complex(1.0 - 1e-15, 0.0);
  const auto t = projector_setting(nudged / nudged.norm(), basis_vector(1, 2));
  EXPECT_EQ(setting_seed(1, s), setting_seed(1, t));
  EXPECT_EQ(canonical_encoding(s), canonical_encoding(t));
  EXPECT_NE(setting_seed(1, s), setting_seed(2, s));
  const auto u = projector_setting(basis_vector(1, 2), basis_vector(1, 2));
  EXPECT_NE(canonical_encoding(s), canonical_encoding(u));
}

TEST(InputStateSet, CountsAndContents) {
  for (std::size_t d = 2; d <= 8; ++d) EXPECT_EQ(input_state_set(d).size(), d * d);
  const auto s2 = input_state_set(2);
  const double h = 1.0 / std::numbers::sqrt2;
  EXPECT_TRUE(approx_equal(s2[0], basis_vector(0, 2), 0.0));
  EXPECT_TRUE(approx_equal(s2[1], basis_vector(1, 2), 0.0));
  EXPECT_NEAR(std::abs(s2[2](1) - h), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(s2[3](1) - Complex(0.0, h)), 0.0, 1e-16);
}

TEST(InputStateSet, ProjectorsAreLinearlyIndependent) {
  for (std::size_t d : {2, 3, 4}) {
    const auto states = input_state_set(d);
    const auto n = static_cast<Eigen::Index>(d * d);
    ComplexMatrix gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const Complex overlap = states[static_cast<std::size_t>(i)].dot(states[static_cast<std::size_t>(j)]);
        gram(i, j) = std::norm(overlap);
      }
    Eigen::FullPivLU<ComplexMatrix> lu(gram);
    EXPECT_EQ(lu.rank(), n) << "dim " << d;
  }
}

TEST(TpComplete, Arithmetic) {
  EXPECT_NEAR(tp_complete({{0, 0.75}}, 2), 0.25, 1e-15);
  EXPECT_NEAR(tp_complete({{0, 0.2}, {1, 0.3}}, 3), 0.5, 1e-15);
  EXPECT_THROW(tp_complete({{0, 0.2}}, 3), ArgumentError);
}

TEST(TpComplete, MatchesDirectMeasurement) {
  std::mt19937_64 rng(77);
  for (std::size_t d : {2, 3, 4}) {
    const auto ch = random_cptp(rng(), 2, d);
    for (const auto& psi : input_state_set(d)) {
      std::map<std::size_t, double> partials;
      for (std::size_t a = 0; a + 1 < d; ++a) {
        partials[a] = exact_expectation(ch, projector_setting(psi, basis_vector(a, d))).value;
      }
      const double direct = exact_expectation(ch, projector_setting(psi, basis_vector(d - 1, d))).value;
      EXPECT_NEAR(tp_complete(partials, d), direct, 1e-12);
    }
  }
}

} // namespace
} // namespace sqpt
