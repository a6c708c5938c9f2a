#pragma once

#include <span>
#include <vector>

#include "sqpt/measure.hpp"
#include "sqpt/qchannel.hpp"

namespace sqpt {

enum class Execution { serial, parallel };

/// Reference loop over settings, one outcome per setting in input order.
std::vector<MeasurementOutcome> evaluate_settings_serial(const QuantumChannel& ch,
                                                         std::span<const MeasurementSetting> settings,
                                                         const BackendConfig& cfg);

/// OpenMP version of evaluate_settings_serial. Outcomes are bit-identical to the
/// serial kernel for any thread count since each setting owns its RNG stream.
std::vector<MeasurementOutcome> evaluate_settings_parallel(const QuantumChannel& ch,
                                                           std::span<const MeasurementSetting> settings,
                                                           const BackendConfig& cfg);

std::vector<MeasurementOutcome> evaluate_settings(const QuantumChannel& ch,
                                                  std::span<const MeasurementSetting> settings,
                                                  const BackendConfig& cfg, Execution exec);

} // namespace sqpt
