#include <gtest/gtest.h>

#include <omp.h>

#include "oracles.hpp"
#include "sqpt/basis.hpp"
#include "sqpt/errors.hpp"
#include "sqpt/kernels.hpp"
#include "sqpt/tomo.hpp"

namespace sqpt {
namespace {

std::vector<MeasurementSetting> all_pairs(std::size_t dim) {
  const auto states = input_state_set(dim);
  std::vector<MeasurementSetting> out;
  for (const auto& in : states)
    for (const auto& obs : states) out.push_back(projector_setting(in, obs));
  return out;
}

TEST(Kernels, ParallelIsBitIdenticalToSerial) {
  const auto ch = random_cptp(9, 3, 3);
  const auto settings = all_pairs(3);
  for (const auto& cfg : {BackendConfig::exact(), BackendConfig::sampled(10'000, 31)}) {
    const auto serial = evaluate_settings_serial(ch, settings, cfg);
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      const auto parallel = evaluate_settings_parallel(ch, settings, cfg);
      ASSERT_EQ(parallel.size(), serial.size());
      for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(parallel[i].value, serial[i].value);
        EXPECT_EQ(parallel[i].std_error, serial[i].std_error);
      }
    }
  }
}

TEST(Kernels, OrderIndependentSampling) {
  const auto ch = random_cptp(10, 2, 2);
  auto settings = all_pairs(2);
  const auto cfg = BackendConfig::sampled(1000, 5);
  const auto forward = evaluate_settings_serial(ch, settings, cfg);
  std::reverse(settings.begin(), settings.end());
  const auto backward = evaluate_settings_serial(ch, settings, cfg);
  for (std::size_t i = 0; i < forward.size(); ++i) {
    EXPECT_EQ(forward[i].value, backward[backward.size() - 1 - i].value);
  }
}

TEST(Kernels, ParallelPropagatesErrors) {
  const QuantumChannel amplifying(2, {1.5 * ComplexMatrix::Identity(2, 2)});
  const auto settings = all_pairs(2);
  EXPECT_THROW(evaluate_settings_parallel(amplifying, settings, BackendConfig::sampled(10, 1)),
               PhysicalityError);
}

TEST(Kernels, FullSqptSerialAndParallelAgree) {
  const auto ch = random_cptp(12, 2, 3);
  const auto cfg = BackendConfig::sampled(2000, 3);
  FullSqptOptions serial;
  serial.exec = Execution::serial;
  FullSqptOptions parallel;
  parallel.exec = Execution::parallel;
  const auto a = full_sqpt(ch, cfg, serial);
  const auto b = full_sqpt(ch, cfg, parallel);
  EXPECT_EQ(max_abs_diff(a.chi.entries, b.chi.entries), 0.0);
}

} // namespace
} // namespace sqpt
