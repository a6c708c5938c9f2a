#include "sqpt/kernels.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sqpt {

std::vector<MeasurementOutcome> evaluate_settings_serial(const QuantumChannel& ch,
                                                         std::span<const MeasurementSetting> settings,
                                                         const BackendConfig& cfg) {
  std::vector<MeasurementOutcome> out;
  out.reserve(settings.size());
  for (const auto& s : settings) out.push_back(measure(ch, s, cfg));
  return out;
}

std::vector<MeasurementOutcome> evaluate_settings_parallel(const QuantumChannel& ch,
                                                           std::span<const MeasurementSetting> settings,
                                                           const BackendConfig& cfg) {
  std::vector<MeasurementOutcome> out(settings.size());
  std::exception_ptr failure;
  const auto n = static_cast<long long>(settings.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = measure(ch, settings[static_cast<std::size_t>(i)], cfg);
    } catch (...) {
#pragma omp critical(sqpt_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<MeasurementOutcome> evaluate_settings(const QuantumChannel& ch,
                                                  std::span<const MeasurementSetting> settings,
                                                  const BackendConfig& cfg, Execution exec) {
  return exec == Execution::serial ? evaluate_settings_serial(ch, settings, cfg)
                                   : evaluate_settings_parallel(ch, settings, cfg);
}

} // namespace sqpt
