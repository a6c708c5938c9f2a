#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "oracles.hpp"
#include "sqpt/basis.hpp"
#include "sqpt/errors.hpp"
#include "sqpt/tomo.hpp"

namespace sqpt {
namespace {

QuantumChannel preset1(const char* name, double p, std::size_t dim = 2) {
  const std::array<double, 1> params{p};
  return preset_channel(name, params, dim);
}

TEST(BetaEntry, Deltas) {
  EXPECT_EQ(beta_entry({0, 0}, {1, 1}, {0, 1}, {0, 1}), 1);
  EXPECT_EQ(beta_entry({0, 1}, {1, 1}, {0, 1}, {0, 1}), 0); // f != a
  // Every row (ab;cd) has exactly one nonzero over (ef;gh) at D=2.
  const std::size_t d = 2;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c)
        for (std::size_t dd = 0; dd < d; ++dd) {
          int row_sum = 0;
          for (std::size_t e = 0; e < d; ++e)
            for (std::size_t f = 0; f < d; ++f)
              for (std::size_t g = 0; g < d; ++g)
                for (std::size_t h = 0; h < d; ++h) row_sum += beta_entry({e, f}, {g, h}, {a, b}, {c, dd});
          EXPECT_EQ(row_sum, 1);
        }
}

TEST(BetaPermutation, DenseMatchesEntriesAndSignOracle) {
  for (std::size_t d : {2, 3}) {
    const auto beta = beta_permutation(d);
    const RealMatrix m = beta.dense();
    const std::size_t d2 = d * d;
    for (std::size_t e = 0; e < d; ++e)
      for (std::size_t f = 0; f < d; ++f)
        for (std::size_t g = 0; g < d; ++g)
          for (std::size_t h = 0; h < d; ++h)
            for (std::size_t a = 0; a < d; ++a)
              for (std::size_t b = 0; b < d; ++b)
                for (std::size_t c = 0; c < d; ++c)
                  for (std::size_t dd = 0; dd < d; ++dd) {
                    const auto row = static_cast<Eigen::Index>((a * d + b) * d2 + c * d + dd);
                    const auto col = static_cast<Eigen::Index>((e * d + f) * d2 + g * d + h);
                    EXPECT_EQ(m(row, col), beta_entry({e, f}, {g, h}, {a, b}, {c, dd}));
                  }
    const auto n = m.rows();
    EXPECT_TRUE((m.transpose() * m).isApprox(RealMatrix::Identity(n, n)));
    std::vector<std::size_t> perm(beta.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = beta.forward(i);
    const int sign = testing::permutation_sign(perm);
    EXPECT_NEAR(m.determinant(), static_cast<double>(sign), 1e-9) << "dim " << d;
    EXPECT_NEAR(std::abs(m.determinant()), 1.0, 1e-9);
  }
  // The permutation is even at D=2 and odd at D=3.
  EXPECT_NEAR(beta_permutation(2).dense().determinant(), 1.0, 1e-9);
  EXPECT_NEAR(beta_permutation(3).dense().determinant(), -1.0, 1e-9);
}

TEST(BetaPermutation, TransposeInvertsAtDim4) {
  const auto beta = beta_permutation(4);
  for (std::size_t i = 0; i < beta.size(); ++i) {
    EXPECT_EQ(beta.transpose(beta.forward(i)), i);
    EXPECT_EQ(beta.forward(beta.transpose(i)), i);
  }
  EXPECT_THROW(beta.dense(), ArgumentError);
}

TEST(LambdaOracle, IdentityIsDelta) {
  const auto lambda = lambda_oracle(preset_channel("identity", {}, 2));
  EXPECT_TRUE(approx_equal(lambda.entries, ComplexMatrix::Identity(4, 4), 0.0));
}

TEST(LambdaOracle, DiagonalTransitionAndMapping) {
  std::mt19937_64 rng(55);
  for (std::size_t d : {2, 3, 4}) {
    const auto ch = random_cptp(rng(), 3, d);
    const auto lambda = lambda_oracle(ch);
    const auto chi = chi_oracle(ch);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        EXPECT_NEAR(std::abs(lambda.at(b, b, a, a) - testing::transition_probability(ch, a, b)), 0.0, 1e-12);
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t dd = 0; dd < d; ++dd)
            EXPECT_NEAR(std::abs(lambda.at(a, b, c, dd) - chi.at(c, a, dd, b)), 0.0, 1e-12);
      }
  }
}

TEST(ChiFromLambda, BothRoutesRecoverOracle) {
  std::mt19937_64 rng(66);
  for (std::size_t d : {2, 3, 4}) {
    const auto ch = random_cptp(rng(), 2, d);
    const auto lambda = lambda_oracle(ch);
    const auto via_perm = chi_from_lambda(lambda);
    const auto via_beta = chi_from_lambda_beta(lambda, beta_permutation(d));
    EXPECT_LT(max_abs_diff(via_perm.entries, chi_oracle(ch).entries), 1e-12);
    EXPECT_LT(max_abs_diff(via_perm.entries, via_beta.entries), 1e-14);
    EXPECT_LT(max_abs_diff(lambda_from_chi(via_perm).entries, lambda.entries), 0.0 + 1e-300);
  }
}

TEST(ChiFromLambda, BetaRouteOnRandomLambda) {
  std::mt19937_64 rng(67);
  LambdaMatrix lambda{2, testing::random_complex(rng, 4, 4)};
  const auto beta = beta_permutation(2);
  const auto via_beta = chi_from_lambda_beta(lambda, beta);
  const auto via_perm = chi_from_lambda(lambda);
  EXPECT_EQ(max_abs_diff(via_beta.entries, via_perm.entries), 0.0);
  // Dense route as well: chi = β^T lambda.
  const ComplexVector dense = beta.dense().transpose().cast<Complex>() * flatten_pairs(lambda.entries);
  EXPECT_LT(max_abs_diff(unflatten_pairs(dense, 2), via_perm.entries), 1e-14);
}

TEST(PlanElement, DiagonalTargetIsOneSetting) {
  const auto plan = plan_element({0, 0, 0, 0}, 2);
  ASSERT_EQ(plan.settings.size(), 1u);
  const auto& s = plan.settings[0].setting;
  EXPECT_TRUE(approx_equal(s.input, basis_vector(0, 2), 0.0));
  EXPECT_TRUE(approx_equal(std::get<ProjectorObservable>(s.observable).phi, basis_vector(0, 2), 0.0));
}

TEST(PlanElement, OffDiagonalTargetIsSixteenSettings) {
  const auto plan = plan_element({0, 0, 1, 1}, 2);
  EXPECT_EQ(plan.settings.size(), 16u);
  EXPECT_EQ(plan.terms.size(), 16u);
  const auto four = expand_choi_four({0, 1, 2});
  for (const auto& planned : plan.settings) {
    const auto& phi = std::get<ProjectorObservable>(planned.setting.observable).phi;
    bool input_known = false;
    bool proj_known = false;
    for (const auto& t : four.terms()) {
      input_known |= approx_equal(planned.setting.input, t.state, 0.0);
      proj_known |= approx_equal(phi, t.state, 0.0);
    }
    EXPECT_TRUE(input_known && proj_known);
  }
}

TEST(PlanElement, HalfDiagonalTargetIsFourSettings) {
  EXPECT_EQ(plan_element({0, 0, 0, 1}, 2).settings.size(), 4u);
  EXPECT_EQ(plan_element({1, 0, 0, 0}, 2).settings.size(), 4u);
}

TEST(PlanElement, CardinalityCaseSplit) {
  for (std::size_t d = 2; d <= 6; ++d)
    for (std::size_t e = 0; e < d; ++e)
      for (std::size_t f = 0; f < d; ++f)
        for (std::size_t g = 0; g < d; ++g)
          for (std::size_t h = 0; h < d; ++h) {
            const auto plan = plan_element({e, f, g, h}, d);
            const std::size_t diag_ops = (f == h ? 1 : 0) + (e == g ? 1 : 0);
            const std::size_t expected = diag_ops == 2 ? 1 : diag_ops == 1 ? 4 : 16;
            ASSERT_EQ(plan.settings.size(), expected) << d << ":" << e << f << g << h;
            ASSERT_EQ(plan.measured_setting_count(), expected);
          }
}

TEST(PlanElement, OutOfRange) { EXPECT_THROW(plan_element({0, 2, 0, 0}, 2), ArgumentError); }

TEST(ReconstructElement, FrozenExamples) {
  const auto id = preset_channel("identity", {}, 2);
  const auto est = reconstruct_element(plan_element({0, 0, 1, 1}, 2), id, BackendConfig::exact());
  EXPECT_NEAR(std::abs(est.value - Complex(1.0)), 0.0, 1e-12);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_EQ(est.settings_used, 16u);

  const auto ad = preset1("amplitude-damping", 0.3);
  const auto ad_est = reconstruct_element(plan_element({0, 1, 0, 1}, 2), ad, BackendConfig::exact());
  EXPECT_NEAR(std::abs(ad_est.value - Complex(0.3)), 0.0, 1e-12);
  EXPECT_NEAR(ad_est.value.real(), testing::transition_probability(ad, 0, 1), 1e-12);
}

TEST(ReconstructElement, SampledBitFlip) {
  const auto bf = preset1("bit-flip", 0.25);
  const auto est =
      reconstruct_element(plan_element({0, 0, 1, 1}, 2), bf, BackendConfig::sampled(1'000'000, 42));
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_LT(std::abs(est.value - Complex(0.75)), 5.0 * est.std_error);
  const auto again =
      reconstruct_element(plan_element({0, 0, 1, 1}, 2), bf, BackendConfig::sampled(1'000'000, 42));
  EXPECT_EQ(est.value, again.value);
}

TEST(ReconstructElement, ExhaustiveOracleAndHermiticity) {
  std::mt19937_64 rng(88);
  for (std::size_t d : {2, 3}) {
    const auto ch = random_cptp(rng(), 2, d);
    const auto chi = chi_oracle(ch);
    for (std::size_t e = 0; e < d; ++e)
      for (std::size_t f = 0; f < d; ++f)
        for (std::size_t g = 0; g < d; ++g)
          for (std::size_t h = 0; h < d; ++h) {
            const auto est = reconstruct_element(plan_element({e, f, g, h}, d), ch, BackendConfig::exact(),
                                                 Execution::serial);
            EXPECT_LT(std::abs(est.value - chi.at(e, f, g, h)), 1e-12);
            const auto mirror = reconstruct_element(plan_element({g, h, e, f}, d), ch,
                                                    BackendConfig::exact(), Execution::serial);
            EXPECT_LT(std::abs(est.value - std::conj(mirror.value)), 1e-12);
          }
  }
}

TEST(ReconstructElement, NonTracePreservingChannelsWork) {
  const QuantumChannel lossy(2, {0.8 * ComplexMatrix::Identity(2, 2)});
  const auto est = reconstruct_element(plan_element({0, 0, 1, 1}, 2), lossy, BackendConfig::exact());
  EXPECT_NEAR(std::abs(est.value - Complex(0.64)), 0.0, 1e-12);
  EXPECT_THROW(reconstruct_element(plan_element({0, 0, 1, 1}, 2, true), lossy, BackendConfig::exact()),
               PhysicalityError);
}

TEST(ReconstructElement, TpShortcutPlanMatches) {
  std::mt19937_64 rng(90);
  const std::size_t d = 3;
  const auto ch = random_cptp(rng(), 2, d);
  const auto chi = chi_oracle(ch);
  const auto plan = plan_element({2, 0, 1, 2}, d, true);
  EXPECT_GT(plan.settings.size(), plan.measured_setting_count());
  const auto est = reconstruct_element(plan, ch, BackendConfig::exact());
  EXPECT_LT(std::abs(est.value - chi.at(2, 0, 1, 2)), 1e-12);
  EXPECT_EQ(est.settings_used, plan.measured_setting_count());
}

TEST(ReconstructElement, DimensionMismatch) {
  EXPECT_THROW(reconstruct_element(plan_element({0, 0, 0, 0}, 3), preset_channel("identity", {}, 2),
                                   BackendConfig::exact()),
               DimensionError);
}

TEST(FullSqpt, IdentityBothStrategies) {
  const auto id = preset_channel("identity", {}, 2);
  const auto oracle = chi_oracle(id);
  for (auto strategy : {SqptStrategy::choi_four, SqptStrategy::product_hermitian}) {
    FullSqptOptions o;
    o.strategy = strategy;
    const auto res = full_sqpt(id, BackendConfig::exact(), o);
    EXPECT_LT(max_abs_diff(res.chi.entries, oracle.entries), 1e-12) << to_string(strategy);
    EXPECT_EQ(res.std_errors.maxCoeff(), 0.0);
  }
}

TEST(FullSqpt, RandomTwoQubitChoiFour) {
  const auto ch = random_cptp(2024, 3, 4);
  const auto res = full_sqpt(ch, BackendConfig::exact());
  EXPECT_LT(max_abs_diff(res.chi.entries, chi_oracle(ch).entries), 1e-10);
  EXPECT_EQ(res.distinct_settings, 256u);
  EXPECT_EQ(res.measured_settings, 256u);
}

TEST(FullSqpt, TpShortcutCounts) {
  for (std::size_t d : {2, 3}) {
    const auto ch = random_cptp(31 + d, 2, d);
    const auto plain = full_sqpt(ch, BackendConfig::exact());
    FullSqptOptions o;
    o.tp_shortcut = true;
    const auto shortcut = full_sqpt(ch, BackendConfig::exact(), o);
    const std::size_t d2 = d * d;
    EXPECT_EQ(plain.measured_settings, d2 * d2);
    EXPECT_EQ(shortcut.measured_settings, d2 * (d2 - 1));
    EXPECT_EQ(shortcut.inferred_settings, d2);
    EXPECT_LT(max_abs_diff(plain.chi.entries, shortcut.chi.entries), 1e-12);
  }
}

TEST(FullSqpt, TpShortcutRejectsLossyChannel) {
  const QuantumChannel lossy(2, {0.8 * ComplexMatrix::Identity(2, 2)});
  FullSqptOptions o;
  o.tp_shortcut = true;
  EXPECT_THROW(full_sqpt(lossy, BackendConfig::exact(), o), PhysicalityError);
}

TEST(FullSqpt, ProductHermitianRecoversOracle) {
  const auto qubits = random_cptp(5, 3, 4);
  FullSqptOptions o;
  o.strategy = SqptStrategy::product_hermitian;
  o.local_dim = 2;
  EXPECT_LT(max_abs_diff(full_sqpt(qubits, BackendConfig::exact(), o).chi.entries,
                         chi_oracle(qubits).entries),
            1e-10);
  o.tp_shortcut = true;
  const auto shortcut = full_sqpt(qubits, BackendConfig::exact(), o);
  EXPECT_LT(max_abs_diff(shortcut.chi.entries, chi_oracle(qubits).entries), 1e-10);
  EXPECT_EQ(shortcut.measured_settings, 16u * 15u);

  const auto qutrit = random_cptp(6, 2, 3);
  FullSqptOptions q;
  q.strategy = SqptStrategy::product_hermitian;
  EXPECT_LT(max_abs_diff(full_sqpt(qutrit, BackendConfig::exact(), q).chi.entries,
                         chi_oracle(qutrit).entries),
            1e-10);
  q.local_dim = 2;
  EXPECT_THROW(full_sqpt(qutrit, BackendConfig::exact(), q), DimensionError);
}

TEST(FullSqpt, SampledErrorsAreConsistent) {
  const auto ch = random_cptp(77, 2, 2);
  const auto oracle = chi_oracle(ch);
  for (auto strategy : {SqptStrategy::choi_four, SqptStrategy::product_hermitian}) {
    FullSqptOptions o;
    o.strategy = strategy;
    const auto res = full_sqpt(ch, BackendConfig::sampled(200'000, 9), o);
    int inside = 0;
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) {
        EXPECT_GT(res.std_errors(i, j), 0.0);
        if (std::abs(res.chi.entries(i, j) - oracle.entries(i, j)) < 5.0 * res.std_errors(i, j)) ++inside;
      }
    EXPECT_GE(inside, 15) << to_string(strategy);
  }
}

} // namespace
} // namespace sqpt
